//! Ordinals below ω^4 in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exponents must stay strictly below this bound.
pub const EXPONENT_CEILING: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("exponent {0} is outside the supported range (must be < {EXPONENT_CEILING})")]
    OutOfScope(u32),
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("cannot parse ordinal literal `{0}`")]
    Parse(String),
}

/// A Cantor normal form `ω^e1·c1 + ω^e2·c2 + …` with `e1 > e2 > …` and every `ci ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(1, 1)],
        }
    }

    pub fn natural(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    /// Builds a normalized ordinal. Terms are sorted by descending exponent and
    /// equal exponents merge by summing coefficients.
    pub fn make(terms: &[(u32, u64)]) -> Result<Self, OrdinalError> {
        let mut sorted = Vec::with_capacity(terms.len());
        for &(e, c) in terms {
            if e >= EXPONENT_CEILING {
                return Err(OrdinalError::OutOfScope(e));
            }
            if c == 0 {
                return Err(OrdinalError::ZeroCoefficient);
            }
            sorted.push((e, c));
        }
        sorted.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut merged: Vec<(u32, u64)> = Vec::with_capacity(sorted.len());
        for (e, c) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        Ok(Ordinal { terms: merged })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_natural(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_natural().is_some()
    }

    pub fn succ(&self) -> Self {
        self.add_natural(1)
    }

    /// `self + n`. On the right, a natural only touches the exponent-0 term.
    pub fn add_natural(&self, n: u64) -> Self {
        if n == 0 {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += n,
            _ => terms.push((0, n)),
        }
        Ordinal { terms }
    }

    /// `sup { self + n : n < ω }`, i.e. `self + ω`.
    pub fn omega_limit(&self) -> Self {
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().filter(|t| t.0 > 0).collect();
        match terms.last_mut() {
            Some((1, c)) => *c += 1,
            _ => terms.push((1, 1)),
        }
        Ordinal { terms }
    }

    /// Supremum of a finite list; the empty supremum is 0.
    pub fn sup<'a, I: IntoIterator<Item = &'a Ordinal>>(items: I) -> Ordinal {
        items.into_iter().max().cloned().unwrap_or_default()
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::natural(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OrdinalError::Parse(s.to_string());
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        for part in trimmed.split('+') {
            let part = part.trim();
            let (base, coeff) = match part.split_once('*') {
                Some((b, c)) => (b.trim(), c.trim().parse::<u64>().map_err(|_| err())?),
                None => (part, 1),
            };
            let exponent = if let Some(rest) = base.strip_prefix('w') {
                match rest.strip_prefix('^') {
                    Some(e) => e.trim().parse::<u32>().map_err(|_| err())?,
                    None if rest.is_empty() => 1,
                    None => return Err(err()),
                }
            } else {
                // a bare natural, possibly with no coefficient part
                if part.contains('*') {
                    return Err(err());
                }
                let n = base.parse::<u64>().map_err(|_| err())?;
                if n == 0 {
                    continue;
                }
                terms.push((0, n));
                continue;
            };
            terms.push((exponent, coeff));
        }
        Ordinal::make(&terms)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_examples() {
        let w_plus_1 = Ordinal::make(&[(1, 1), (0, 1)]).unwrap();
        assert_eq!(w_plus_1.to_string(), "w + 1");
        let w2 = Ordinal::make(&[(1, 2)]).unwrap();
        assert_eq!(w2.to_string(), "w*2");
        assert_eq!(Ordinal::omega().omega_limit(), w2);
        assert!(Ordinal::make(&[]).unwrap().is_zero());
    }

    #[test]
    fn make_merges_and_rejects() {
        let merged = Ordinal::make(&[(0, 2), (1, 1), (1, 1)]).unwrap();
        assert_eq!(merged.terms(), &[(1, 2), (0, 2)]);
        assert_eq!(Ordinal::make(&[(4, 1)]), Err(OrdinalError::OutOfScope(4)));
        assert_eq!(Ordinal::make(&[(1, 0)]), Err(OrdinalError::ZeroCoefficient));
    }

    #[test]
    fn comparison_examples() {
        assert!(Ordinal::omega() > Ordinal::natural(5));
        let w_plus_1 = Ordinal::omega().succ();
        assert!(w_plus_1 < Ordinal::make(&[(1, 2)]).unwrap());
        let xs = [Ordinal::natural(3), Ordinal::omega(), Ordinal::natural(2)];
        assert_eq!(Ordinal::sup(&xs), Ordinal::omega());
        assert_eq!(Ordinal::sup(&[]), Ordinal::zero());
    }

    #[test]
    fn text_round_trip() {
        for text in ["0", "3", "w", "w*2", "w + 1", "w^3*2 + w^2 + w*7 + 4"] {
            let o: Ordinal = text.parse().unwrap();
            assert_eq!(o.to_string(), text);
        }
        assert!("w^9".parse::<Ordinal>().is_err());
        assert!("banana".parse::<Ordinal>().is_err());
    }
}
