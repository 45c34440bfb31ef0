//! Text form of Puiseux elements: sums of `c*t^(p/q)` terms, optionally
//! closed by an `O(t^w)` marker for truncated elements, e.g.
//! `1 - 3/2*t^(1/2) + t^2 + O(t^3)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::puiseux::{Exponent, Puiseux, Rational};
use crate::error::Error;

fn fmt_exponent(e: &Exponent) -> String {
    if e.is_integer() && !e.is_negative() {
        e.to_integer().to_string()
    } else {
        format!("({})", e)
    }
}

fn fmt_power(e: &Exponent) -> String {
    if e.is_one() {
        "t".to_string()
    } else {
        format!("t^{}", fmt_exponent(e))
    }
}

impl fmt::Display for Puiseux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, (e, c)) in self.terms().iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if e.is_zero() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&fmt_power(e));
            } else {
                out.push_str(&format!("{}*{}", mag, fmt_power(e)));
            }
        }
        if let Some(w) = self.certified_order() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O({})", fmt_power(&w)));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{} at offset {} in {:?}", what, self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c)))
        }
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn unsigned_rational(&mut self) -> Result<Rational, Error> {
        let n = self.integer()?;
        if self.eat('/') {
            let d = self.integer()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn small_rational(&mut self) -> Result<Exponent, Error> {
        let negative = self.eat('-');
        let r = self.unsigned_rational()?;
        let to_i64 = |b: &BigInt| -> Result<i64, Error> {
            i64::try_from(b).map_err(|_| self.err("exponent out of range"))
        };
        let e = Exponent::new(to_i64(r.numer())?, to_i64(r.denom())?);
        Ok(if negative { -e } else { e })
    }

    fn exponent(&mut self) -> Result<Exponent, Error> {
        if self.eat('^') {
            if self.eat('(') {
                let e = self.small_rational()?;
                self.expect(')')?;
                Ok(e)
            } else {
                self.small_rational()
            }
        } else {
            Ok(Exponent::one())
        }
    }

    fn power(&mut self) -> Result<Exponent, Error> {
        self.expect('t')?;
        self.exponent()
    }

    fn parse(mut self) -> Result<Puiseux, Error> {
        let mut terms = Vec::new();
        let mut window: Option<Exponent> = None;
        let mut first = true;
        loop {
            let negative = if first {
                self.eat('-')
            } else if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            first = false;
            if self.eat('O') {
                if window.is_some() {
                    return Err(self.err("duplicate O(...) marker"));
                }
                self.expect('(')?;
                window = Some(self.power()?);
                self.expect(')')?;
                continue;
            }
            let (coef, exp) = match self.peek() {
                Some('t') => (Rational::one(), self.power()?),
                Some(c) if c.is_ascii_digit() => {
                    let c = self.unsigned_rational()?;
                    if self.eat('*') {
                        (c, self.power()?)
                    } else {
                        (c, Exponent::zero())
                    }
                }
                _ => return Err(self.err("expected a term")),
            };
            terms.push((exp, if negative { -coef } else { coef }));
        }
        if self.pos != self.chars.len() || first {
            return Err(self.err("unexpected input"));
        }
        if let Some(w) = window {
            if terms.iter().any(|(e, _)| *e >= w) {
                return Err(self.err("term at or beyond the O(...) window"));
            }
        }
        Ok(Puiseux::from_terms(terms, window))
    }
}

impl FromStr for Puiseux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser::new(s).parse()
    }
}

impl Serialize for Puiseux {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Puiseux {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_example() {
        let x: Puiseux = "1 - 3/2*t^(1/2) + t^2".parse().unwrap();
        assert_eq!(x.terms().len(), 3);
        assert_eq!(x.to_string(), "1 - 3/2*t^(1/2) + t^2");
    }

    #[test]
    fn accepts_bare_negative_exponents() {
        let a: Puiseux = "t^-1".parse().unwrap();
        let b: Puiseux = "t^(-1)".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "t^(-1)");
    }

    #[test]
    fn truncation_marker_round_trips() {
        let x: Puiseux = "1 - t + O(t^3)".parse().unwrap();
        assert_eq!(x.certified_order(), Some(Exponent::from_integer(3)));
        assert_eq!(x.to_string(), "1 - t + O(t^3)");
        let z: Puiseux = "O(t^2)".parse().unwrap();
        assert_eq!(z.to_string(), "O(t^2)");
    }

    #[test]
    fn zero_and_like_terms() {
        assert!("0".parse::<Puiseux>().unwrap().is_exact_zero());
        assert_eq!("t + t".parse::<Puiseux>().unwrap().to_string(), "2*t");
        assert_eq!(Puiseux::zero().to_string(), "0");
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "1 +",
            "x",
            "t^",
            "1/0",
            "2**t",
            "1 + t + O(t^1)",
            "O(t)+O(t)",
        ] {
            assert!(bad.parse::<Puiseux>().is_err(), "{:?} should fail", bad);
        }
    }
}
