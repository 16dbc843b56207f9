//! Concrete word syntax.
//!
//! ```text
//! word := term ('*'? term)*
//! term := atom ('^' '-'? digits)?
//! atom := 'x' digits            variable, 1-based
//!       | 'g' digits            constant, element index
//!       | '1'                   empty word
//!       | '(' word ')'
//!       | '[' word ',' word ']' commutator
//! ```
//!
//! Whitespace may separate any two tokens and the `*` between terms is
//! optional, so `x1 x2^-1` and `x1*x2^-1` parse the same.

use super::{Letter, Word, WordContext};
use crate::error::Error;
use crate::Result;

pub(super) fn parse(ctx: &WordContext, text: &str) -> Result<Word> {
    let mut parser = Parser {
        ctx,
        text: text.as_bytes(),
        pos: 0,
    };
    let word = parser.word()?;
    parser.skip_ws();
    match parser.peek() {
        None => Ok(word),
        Some(c) => Err(parser.error(format!("unexpected `{}`", c as char))),
    }
}

struct Parser<'a> {
    ctx: &'a WordContext,
    text: &'a [u8],
    pos: usize,
}

enum Atom {
    Var(usize),
    Const(usize),
    Group(Word),
}

impl<'a> Parser<'a> {
    fn error(&self, msg: String) -> Error {
        Error::WordSyntax { pos: self.pos, msg }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn digits(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected digits".into()));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::ExponentOverflow)
    }

    /// True at positions where a term can start.
    fn at_term_start(&self) -> bool {
        matches!(self.peek(), Some(b'x' | b'g' | b'1' | b'(' | b'['))
    }

    fn word(&mut self) -> Result<Word> {
        self.skip_ws();
        if !self.at_term_start() {
            return Err(self.error("expected a term: variable, constant, `1`, `(`, or `[`".into()));
        }
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if !self.at_term_start() {
                    return Err(self.error("expected a term after `*`".into()));
                }
            } else if !self.at_term_start() {
                return Ok(acc);
            }
            let next = self.term()?;
            acc = acc.mul(self.ctx, &next)?;
        }
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_ws();
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let magnitude = self.digits()?;
            if magnitude > i64::MAX as u64 {
                return Err(Error::ExponentOverflow);
            }
            let value = magnitude as i64;
            Some(if negative { -value } else { value })
        } else {
            None
        };

        match (atom, exp) {
            (Atom::Var(index), exp) => Word::from_letters(
                self.ctx,
                vec![Letter::Var {
                    index,
                    exp: exp.unwrap_or(1),
                }],
            ),
            (Atom::Const(elem), None) => Word::constant(self.ctx, elem),
            (Atom::Const(elem), Some(exp)) => {
                let group = self
                    .ctx
                    .constants()
                    .expect("constant atoms are rejected without coefficients");
                Word::constant(self.ctx, group.pow(elem, exp))
            }
            (Atom::Group(word), None) => Ok(word),
            (Atom::Group(word), Some(exp)) => word.pow(self.ctx, exp),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let display = self.digits()? as usize;
                if display == 0 || display > self.ctx.nvars() {
                    return Err(Error::VarOutOfRange {
                        display,
                        nvars: self.ctx.nvars(),
                    });
                }
                Ok(Atom::Var(display - 1))
            }
            Some(b'g') => {
                self.pos += 1;
                let elem = self.digits()? as usize;
                match self.ctx.constants() {
                    None => Err(Error::ConstantWithoutCoefficients { index: elem }),
                    Some(group) => {
                        if elem >= group.order() {
                            Err(Error::ConstantOutOfRange {
                                index: elem,
                                order: group.order(),
                            })
                        } else {
                            Ok(Atom::Const(elem))
                        }
                    }
                }
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Atom::Group(Word::identity()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                self.expect(b')')?;
                Ok(Atom::Group(inner))
            }
            Some(b'[') => {
                self.pos += 1;
                let left = self.word()?;
                self.expect(b',')?;
                let right = self.word()?;
                self.expect(b']')?;
                Ok(Atom::Group(Word::commutator(self.ctx, &left, &right)?))
            }
            _ => Err(self.error("expected a variable, constant, `1`, `(`, or `[`".into())),
        }
    }
}
