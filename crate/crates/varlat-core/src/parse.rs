//! Text syntax for words, identities and basis files.
//!
//! Words are juxtaposed letters with optional `^k` exponents, e.g.
//! `x^2y` or `x^2*y`; the letters `x y z q t` name indices 1 through 5
//! and `x_7` names index 7. An identity is `u = v` or `w = 0`. A basis
//! file holds one identity per line; `#` starts a comment and a line
//! consisting of the word `commutative` adds the commutative law.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Basis, Identity, Letter, Word};

const MAX_EXPONENT: u32 = 10_000;

/// A syntax error with the byte position where it was detected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl core::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_filler(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'*')) {
            self.pos += 1;
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, ParseError> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .saturating_mul(10)
                .saturating_add((c - b'0') as u32);
            self.pos += 1;
        }
        if self.pos == start {
            return err(start, format!("expected digits for {}", what));
        }
        if value > MAX_EXPONENT {
            return err(start, format!("{} too large (limit {})", what, MAX_EXPONENT));
        }
        Ok(value)
    }

    fn letter(&mut self) -> Result<Letter, ParseError> {
        let start = self.pos;
        let c = match self.peek() {
            Some(c) => c,
            None => return err(start, "expected a letter"),
        };
        let index = match c {
            b'x' => 1,
            b'y' => 2,
            b'z' => 3,
            b'q' => 4,
            b't' => 5,
            other => {
                return err(
                    start,
                    format!("unexpected character '{}'", other as char),
                )
            }
        };
        self.pos += 1;
        if index == 1 && self.peek() == Some(b'_') {
            self.pos += 1;
            let idx = self.number("letter index")?;
            if idx == 0 {
                return err(start, "letter index 0 is not allowed");
            }
            return Ok(Letter::new(idx).unwrap());
        }
        Ok(Letter::new(index).unwrap())
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let start = self.pos;
        let mut letters: Vec<Letter> = Vec::new();
        loop {
            self.skip_filler();
            match self.peek() {
                Some(c) if matches!(c, b'x' | b'y' | b'z' | b'q' | b't') => {
                    let l = self.letter()?;
                    self.skip_filler();
                    let exponent = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_filler();
                        let e_pos = self.pos;
                        let e = self.number("exponent")?;
                        if e == 0 {
                            return err(e_pos, "exponent 0 is not allowed");
                        }
                        e
                    } else {
                        1
                    };
                    if letters.len() as u32 + exponent > MAX_EXPONENT {
                        return err(start, format!("word longer than {}", MAX_EXPONENT));
                    }
                    for _ in 0..exponent {
                        letters.push(l);
                    }
                }
                _ => break,
            }
        }
        if letters.is_empty() {
            return err(self.pos, "empty word");
        }
        Ok(Word::new(letters).unwrap())
    }
}

/// Parses a single word.
pub fn parse_word(input: &str) -> Result<Word, ParseError> {
    let mut cur = Cursor::new(input);
    let w = cur.word()?;
    cur.skip_filler();
    if let Some(c) = cur.peek() {
        return err(cur.pos, format!("unexpected character '{}'", c as char));
    }
    Ok(w)
}

/// Parses `u = v` or `w = 0`.
pub fn parse_identity(input: &str) -> Result<Identity, ParseError> {
    let mut cur = Cursor::new(input);
    let lhs = cur.word()?;
    cur.skip_filler();
    if cur.peek() != Some(b'=') {
        return err(cur.pos, "expected '='");
    }
    cur.pos += 1;
    cur.skip_filler();
    let identity = if cur.peek() == Some(b'0') {
        cur.pos += 1;
        Identity::ZeroReduced(lhs)
    } else {
        if let Some(c) = cur.peek() {
            if !matches!(c, b'x' | b'y' | b'z' | b'q' | b't') {
                return err(cur.pos, format!("unexpected character '{}'", c as char));
            }
        }
        let rhs = cur.word()?;
        Identity::Equation(lhs, rhs)
    };
    cur.skip_filler();
    if let Some(c) = cur.peek() {
        return err(cur.pos, format!("unexpected character '{}'", c as char));
    }
    Ok(identity)
}

/// Parses a basis text: one identity per line, `#` comments, and an
/// optional `commutative` directive line that adds the commutative law.
pub fn parse_basis(input: &str) -> Result<Basis, ParseError> {
    let mut identities = Vec::new();
    let mut commutative_directive = false;
    let mut offset = 0usize;
    for line in input.split('\n') {
        let content = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            offset += line.len() + 1;
            continue;
        }
        if trimmed == "commutative" {
            commutative_directive = true;
            offset += line.len() + 1;
            continue;
        }
        let local_start = content.len() - content.trim_start().len();
        let identity = parse_identity(trimmed).map_err(|e| ParseError {
            position: offset + local_start + e.position,
            message: e.message,
        })?;
        identities.push(identity);
        offset += line.len() + 1;
    }
    let basis = Basis::new(identities);
    Ok(if commutative_directive {
        basis.ensure_commutative()
    } else {
        basis
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Identity, Q, X, Y};
    use alloc::string::ToString;

    #[test]
    fn words_round_trip() {
        for s in ["x", "xy", "x^2y", "xyx", "x^3y^2z", "qt", "x_7y"] {
            let w = parse_word(s).unwrap();
            assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        }
        assert_eq!(parse_word("x^2*y").unwrap(), parse_word("x^2y").unwrap());
        assert_eq!(parse_word(" x ^ 2 y ").unwrap(), parse_word("xxy").unwrap());
    }

    #[test]
    fn identities_round_trip() {
        for s in ["xy = yx", "x^2y = 0", "x^3 = x^4", "xyzt = 0", "qy^8z^3x = x"] {
            let id = parse_identity(s).unwrap();
            assert_eq!(parse_identity(&id.to_string()).unwrap(), id);
        }
    }

    #[test]
    fn structured_values() {
        let id = parse_identity("x^2y = y^2x").unwrap();
        match id {
            Identity::Equation(u, v) => {
                assert_eq!(u.letters(), &[X, X, Y]);
                assert_eq!(v.letters(), &[Y, Y, X]);
            }
            _ => panic!("expected equation"),
        }
        let id = parse_identity("xq = 0").unwrap();
        match id {
            Identity::ZeroReduced(w) => assert_eq!(w.letters(), &[X, Q]),
            _ => panic!("expected zero identity"),
        }
    }

    #[test]
    fn error_positions() {
        let e = parse_identity("x^0y = y").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(e.message.contains("exponent 0"));

        let e = parse_identity("= x").unwrap_err();
        assert_eq!(e.position, 0);
        assert!(e.message.contains("empty word"));

        let e = parse_identity("xy = ").unwrap_err();
        assert!(e.message.contains("empty word"));

        let e = parse_word("xa").unwrap_err();
        assert_eq!(e.position, 1);
        assert!(e.message.contains("unexpected character 'a'"));

        let e = parse_identity("xy == yx").unwrap_err();
        assert!(e.message.contains("unexpected character"));
    }

    #[test]
    fn basis_files() {
        let text = "# an example basis\ncommutative\nx^3 = 0   # nilpotency\n\nx^2y = y^2x\n";
        let b = parse_basis(text).unwrap();
        assert!(b.is_commutative());
        assert_eq!(b.identities().len(), 3);

        let text = "xy = yx\nx^3 = 0";
        let b = parse_basis(text).unwrap();
        assert!(b.is_commutative());
        assert_eq!(b.identities().len(), 2);

        let e = parse_basis("xy = yx\nx^^2 = x").unwrap_err();
        // points at the second caret, where the digits were expected
        assert_eq!(e.position, 10);
        assert!(e.message.contains("expected digits"));
    }

    #[test]
    fn high_letter_indices() {
        let w = parse_word("x_6x_6y").unwrap();
        assert_eq!(w.to_string(), "x_6^2y");
        assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        // x_2 is the same letter as y
        assert_eq!(parse_word("x_2"), parse_word("y"));
    }
}
