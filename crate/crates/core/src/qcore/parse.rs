//! Ket-notation text format for pure states.
//!
//! ```text
//! state  := term (('+' | '-') term)*        leading sign allowed
//! term   := [coeff ['*']] '|' bits ('>' | '⟩')
//! coeff  := real | '(' real-or-imag (('+'|'-') real-or-imag)* ')'
//! real   := factor ('/' factor)*
//! factor := number | 'sqrt(' number ')'
//! ```
//!
//! Whitespace is ignored between tokens. Parenthesized coefficients may carry
//! an imaginary part written with a trailing `i`, e.g. `(0.5-0.25i)|01>`.
//! Duplicate basis terms are rejected rather than summed.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::qcore::matrix::C64;
use crate::qcore::state::PureState;

/// Amplitudes at or below this modulus are omitted by [`format_state`].
const FORMAT_CUTOFF: f64 = 1e-15;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        let mut seen_digit = false;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            seen_digit |= bytes[end].is_ascii_digit();
            end += 1;
        }
        if !seen_digit {
            return self.err("expected a number");
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            let digits_start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            if k > digits_start {
                end = k;
            }
        }
        let text = &self.rest()[..end];
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err(format!("malformed number {text:?}")),
        }
    }

    fn factor(&mut self) -> Result<f64> {
        if self.eat_str("sqrt") {
            self.expect('(')?;
            let v = self.number()?;
            self.expect(')')?;
            Ok(v.sqrt())
        } else {
            self.number()
        }
    }

    fn real(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        while self.eat('/') {
            let d = self.factor()?;
            if d == 0.0 {
                return self.err("division by zero");
            }
            v /= d;
        }
        Ok(v)
    }

    fn complex_paren(&mut self) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1.0
            } else if self.eat('+') || first {
                1.0
            } else {
                break;
            };
            first = false;
            let v = if self.peek() == Some('i') {
                1.0
            } else {
                self.real()?
            };
            if self.eat('i') {
                acc.im += sign * v;
            } else {
                acc.re += sign * v;
            }
        }
        self.expect(')')?;
        Ok(acc)
    }

    fn coefficient(&mut self) -> Result<C64> {
        match self.peek() {
            Some('|') => Ok(C64::new(1.0, 0.0)),
            Some('(') => {
                self.pos += 1;
                let z = self.complex_paren()?;
                self.eat('*');
                Ok(z)
            }
            _ => {
                let v = self.real()?;
                self.eat('*');
                Ok(C64::new(v, 0.0))
            }
        }
    }

    fn ket(&mut self) -> Result<&'a str> {
        self.expect('|')?;
        let start = self.pos;
        let len = self.rest().bytes().take_while(|b| *b == b'0' || *b == b'1').count();
        if len == 0 {
            return self.err("expected a bitstring");
        }
        self.pos += len;
        let bits = &self.src[start..start + len];
        if !(self.eat_str(">") || self.eat_str("⟩")) {
            return self.err("expected '>' closing the ket");
        }
        Ok(bits)
    }
}

/// Parses and normalizes a state such as `1/sqrt(2)|01> + 1/sqrt(2)|10>`.
pub fn parse_state(text: &str) -> Result<PureState> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(&str, C64)> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut first = true;
    loop {
        let sign = if cur.eat('-') {
            -1.0
        } else if cur.eat('+') {
            1.0
        } else if first {
            1.0
        } else {
            break;
        };
        first = false;
        let coeff = cur.coefficient()? * sign;
        let bits = cur.ket()?;
        if let Some((prev, _)) = terms.first() {
            if prev.len() != bits.len() {
                return Err(Error::InconsistentBits(bits.to_string(), prev.len()));
            }
        }
        if !seen.insert(bits) {
            return Err(Error::DuplicateTerm(bits.to_string()));
        }
        terms.push((bits, coeff));
    }
    if cur.peek().is_some() {
        return cur.err("unexpected trailing input");
    }
    let n = terms[0].0.len();
    if !(2..=4).contains(&n) {
        return Err(Error::UnsupportedRegister(n));
    }
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (bits, coeff) in terms {
        amps[usize::from_str_radix(bits, 2).expect("validated bitstring")] = coeff;
    }
    PureState::from_amplitudes(amps)
}

/// Renders a state in the grammar accepted by [`parse_state`]. Real
/// coefficients are written bare; anything with an imaginary part is
/// parenthesized. Numbers use the shortest representation that round-trips.
pub fn format_state(state: &PureState) -> String {
    let n = state.num_qubits();
    let mut out = String::new();
    for (i, z) in state.amplitudes().iter().enumerate() {
        if z.norm() <= FORMAT_CUTOFF {
            continue;
        }
        let bits = format!("{i:0n$b}");
        if z.im == 0.0 {
            let mag = z.re.abs();
            match (out.is_empty(), z.re < 0.0) {
                (true, false) => write!(out, "{mag}|{bits}>"),
                (true, true) => write!(out, "-{mag}|{bits}>"),
                (false, false) => write!(out, " + {mag}|{bits}>"),
                (false, true) => write!(out, " - {mag}|{bits}>"),
            }
        } else {
            let sep = if out.is_empty() { "" } else { " + " };
            write!(out, "{sep}({}{:+}i)|{bits}>", z.re, z.im)
        }
        .expect("writing to a String");
    }
    out
}
