//! Lower central series and nilpotency class.

use std::sync::Arc;

use crate::group::{subgroup_closure, FiniteGroup, Subgroup};

/// Computes the lower central series `G = g_1 >= g_2 >= ...` where
/// `g_{k+1} = [g_k, G]`, stopping at the first repeated term (inclusive).
///
/// Each `g_k` is normal, so the subgroup generated by the commutators
/// `[x, y]` with `x` in `g_k` and `y` in `G` is already `[g_k, G]`.
pub fn lower_central_series(parent: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let g = parent.as_ref();
    let whole: Vec<usize> = g.elements().collect();
    let mut series = vec![subgroup_closure(parent, &whole).expect("elements are in range")];
    loop {
        let current = series.last().unwrap();
        let mut commutators: Vec<usize> = current
            .elements()
            .iter()
            .flat_map(|&x| g.elements().map(move |y| g.commutator(x, y)))
            .collect();
        commutators.sort_unstable();
        commutators.dedup();
        let next = subgroup_closure(parent, &commutators).expect("elements are in range");
        if next.elements() == current.elements() {
            break;
        }
        series.push(next);
    }
    series
}

/// The nilpotency class of the group, or `None` if it is not nilpotent.
///
/// The trivial group has class 0 and abelian groups class at most 1.
pub fn nilpotency_class(parent: &Arc<FiniteGroup>) -> Option<usize> {
    let series = lower_central_series(parent);
    if series.last().unwrap().is_trivial() {
        Some(series.len() - 1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builders::{build_group, GroupSpec};

    fn arc(spec: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&spec.parse::<GroupSpec>().unwrap()).unwrap())
    }

    #[test]
    fn trivial_group_class_zero() {
        assert_eq!(nilpotency_class(&arc("cyclic(1)")), Some(0));
    }

    #[test]
    fn abelian_class_one() {
        let g = arc("cyclic(6)");
        let series = lower_central_series(&g);
        assert_eq!(series.len(), 2);
        assert!(series[1].is_trivial());
        assert_eq!(nilpotency_class(&g), Some(1));
    }

    #[test]
    fn symmetric_three_not_nilpotent() {
        let g = arc("symmetric(3)");
        let series = lower_central_series(&g);
        // The derived subgroup is the alternating group {e, (123), (132)}
        // and the series stabilizes there.
        assert_eq!(series.last().unwrap().elements(), &[0, 3, 4]);
        assert_eq!(nilpotency_class(&g), None);
    }

    #[test]
    fn class_two_families() {
        for spec in ["dihedral(4)", "quaternion8", "unitriangular(3,2)", "unitriangular(3,3)"] {
            let g = arc(spec);
            assert_eq!(nilpotency_class(&g), Some(2), "{spec}");
        }
    }

    #[test]
    fn quaternion_derived_subgroup() {
        let g = arc("quaternion8");
        let series = lower_central_series(&g);
        assert_eq!(series[1].elements(), &[0, 1]);
    }

    #[test]
    fn unitriangular_derived_is_center() {
        let g = arc("unitriangular(3,3)");
        let series = lower_central_series(&g);
        assert_eq!(series[1].elements(), &[0, 3, 6]);
    }
}
