//! Finite words over `{0, …, radix-1}` stored as runs with exact counts.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::count::{pow_mod, Count, CountError, CountPrinter, Term, TermKind, LITERAL_BITS};

/// Literal runs up to this length print as plain digits.
const INLINE_RUN: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("digit {digit} is not below radix {radix}")]
    BadDigit { digit: u32, radix: u8 },
    #[error("malformed word literal `{0}`")]
    Malformed(String),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub digit: u8,
    pub count: Count,
}

/// Runs are nonempty and adjacent runs carry different digits, so equal words
/// have equal run lists.
#[derive(Debug, Clone)]
pub struct Word {
    radix: u8,
    runs: Vec<Run>,
    len: Count,
}

impl Word {
    pub fn empty(radix: u8) -> Word {
        assert!(radix >= 2, "radix must be at least 2");
        Word {
            radix,
            runs: Vec::new(),
            len: Count::zero(),
        }
    }

    pub fn from_digits(radix: u8, digits: &[u8]) -> Result<Word, WordError> {
        let mut w = Word::empty(radix);
        for &d in digits {
            if d >= radix {
                return Err(WordError::BadDigit {
                    digit: d as u32,
                    radix,
                });
            }
            w.push(d);
        }
        Ok(w)
    }

    /// Parses plain digits plus `{d^n}` for a run of `n` copies of `d`.
    pub fn parse(radix: u8, text: &str) -> Result<Word, WordError> {
        let bad = || WordError::Malformed(text.to_string());
        let mut w = Word::empty(radix);
        let mut chars = text.trim().chars().peekable();
        while let Some(c) = chars.next() {
            if c == '{' {
                let mut inner = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some(ch) => inner.push(ch),
                        None => return Err(bad()),
                    }
                }
                let (d, n) = inner.split_once('^').ok_or_else(bad)?;
                let d: u32 = d.trim().parse().map_err(|_| bad())?;
                let n: u64 = n.trim().parse().map_err(|_| bad())?;
                if d >= radix as u32 {
                    return Err(WordError::BadDigit { digit: d, radix });
                }
                w.push_run(d as u8, &Count::from_u64(n));
            } else {
                let d = c.to_digit(10).ok_or_else(bad)?;
                if d >= radix as u32 {
                    return Err(WordError::BadDigit { digit: d, radix });
                }
                w.push(d as u8);
            }
        }
        Ok(w)
    }

    pub fn radix(&self) -> u8 {
        self.radix
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn len(&self) -> &Count {
        &self.len
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn last_digit(&self) -> Option<u8> {
        self.runs.last().map(|r| r.digit)
    }

    pub fn first_digit(&self) -> Option<u8> {
        self.runs.first().map(|r| r.digit)
    }

    /// Digits, when the word is literal and at most `limit` long.
    pub fn digits(&self, limit: u64) -> Option<Vec<u8>> {
        let n = self.len.to_u64()?;
        if n > limit {
            return None;
        }
        let mut out = Vec::with_capacity(n as usize);
        for r in &self.runs {
            let c = r.count.to_u64()?;
            out.extend(std::iter::repeat_n(r.digit, c as usize));
        }
        Some(out)
    }

    pub fn push(&mut self, digit: u8) {
        self.push_run(digit, &Count::from_u64(1));
    }

    pub fn push_run(&mut self, digit: u8, count: &Count) {
        assert!(digit < self.radix, "digit {digit} out of range");
        if count.is_zero() {
            return;
        }
        self.len = self.len.add(count);
        match self.runs.last_mut() {
            Some(last) if last.digit == digit => last.count = last.count.add(count),
            _ => self.runs.push(Run {
                digit,
                count: count.clone(),
            }),
        }
    }

    pub fn appended(&self, digit: u8) -> Word {
        let mut w = self.clone();
        w.push(digit);
        w
    }

    pub fn concat(&self, tail: &Word) -> Word {
        let mut w = self.clone();
        for r in &tail.runs {
            w.push_run(r.digit, &r.count);
        }
        w
    }

    /// The remainder after `prefix`, or `None` if `prefix` is not a prefix.
    pub fn strip_prefix(&self, prefix: &Word) -> Result<Option<Word>, WordError> {
        let n = prefix.runs.len();
        if n == 0 {
            return Ok(Some(self.clone()));
        }
        for i in 0..n - 1 {
            match self.runs.get(i) {
                Some(r) if r.digit == prefix.runs[i].digit => {
                    if r.count.try_cmp(&prefix.runs[i].count)? != Ordering::Equal {
                        return Ok(None);
                    }
                }
                _ => return Ok(None),
            }
        }
        let last = &prefix.runs[n - 1];
        let here = match self.runs.get(n - 1) {
            Some(r) if r.digit == last.digit => r,
            _ => return Ok(None),
        };
        if here.count.try_cmp(&last.count)? == Ordering::Less {
            return Ok(None);
        }
        let mut rest = Word::empty(self.radix);
        rest.push_run(here.digit, &here.count.checked_sub(&last.count)?);
        for r in &self.runs[n..] {
            rest.push_run(r.digit, &r.count);
        }
        Ok(Some(rest))
    }

    pub fn has_prefix(&self, prefix: &Word) -> Result<bool, WordError> {
        Ok(self.strip_prefix(prefix)?.is_some())
    }

    /// The prefix of the given length.
    pub fn prefix(&self, length: &Count) -> Result<Word, WordError> {
        let mut out = Word::empty(self.radix);
        let mut remaining = length.clone();
        for r in &self.runs {
            if remaining.is_zero() {
                break;
            }
            match r.count.try_cmp(&remaining)? {
                Ordering::Greater => {
                    out.push_run(r.digit, &remaining);
                    remaining = Count::zero();
                }
                _ => {
                    remaining = remaining.checked_sub(&r.count)?;
                    out.push_run(r.digit, &r.count);
                }
            }
        }
        if !remaining.is_zero() {
            return Err(WordError::Count(CountError::Negative));
        }
        Ok(out)
    }

    /// Lexicographic order of words of equal length.
    pub fn lex_cmp(&self, other: &Word) -> Result<Ordering, WordError> {
        let (mut i, mut j) = (0, 0);
        let mut left = self.runs.first().map(|r| r.count.clone());
        let mut right = other.runs.first().map(|r| r.count.clone());
        loop {
            match (&left, &right) {
                (None, None) => return Ok(Ordering::Equal),
                (None, Some(_)) => return Ok(Ordering::Less),
                (Some(_), None) => return Ok(Ordering::Greater),
                (Some(a), Some(b)) => {
                    let (da, db) = (self.runs[i].digit, other.runs[j].digit);
                    if da != db {
                        return Ok(da.cmp(&db));
                    }
                    match a.try_cmp(b)? {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                            left = self.runs.get(i).map(|r| r.count.clone());
                            right = other.runs.get(j).map(|r| r.count.clone());
                        }
                        Ordering::Less => {
                            let rest = b.checked_sub(a)?;
                            i += 1;
                            left = self.runs.get(i).map(|r| r.count.clone());
                            right = Some(rest);
                        }
                        Ordering::Greater => {
                            let rest = a.checked_sub(b)?;
                            j += 1;
                            right = other.runs.get(j).map(|r| r.count.clone());
                            left = Some(rest);
                        }
                    }
                }
            }
        }
    }

    /// Shortlex order: by length, then by numeric value.
    pub fn shortlex_cmp(&self, other: &Word) -> Result<Ordering, WordError> {
        match self.len.try_cmp(&other.len)? {
            Ordering::Equal => self.lex_cmp(other),
            o => Ok(o),
        }
    }

    fn without_leading_zeros(&self) -> Word {
        let skip = usize::from(self.first_digit() == Some(0));
        let mut w = Word::empty(self.radix);
        for r in &self.runs[skip..] {
            w.push_run(r.digit, &r.count);
        }
        w
    }

    /// The numeric value in base `radix`, most significant digit first.
    pub fn value(&self) -> Count {
        let stripped = self.without_leading_zeros();
        if stripped.is_empty() {
            return Count::zero();
        }
        if let Some(n) = stripped.len.to_u64() {
            if stripped.runs.iter().all(|r| r.count.is_literal()) && n <= LITERAL_BITS {
                let mut v = BigUint::zero();
                let radix = BigUint::from(self.radix);
                for r in &stripped.runs {
                    let c = r.count.to_u64().expect("literal run") as u32;
                    let p = radix.pow(c);
                    // v * k^c + d * (k^c - 1) / (k - 1)
                    v = v * &p + BigUint::from(r.digit) * ((&p - 1u32) / (self.radix as u32 - 1));
                }
                if v.bits() < LITERAL_BITS {
                    return Count::from_biguint(v);
                }
            }
        }
        Count::from_term(Term::new(TermKind::Value(stripped)))
    }

    /// The word of the given length whose value is `value`.
    pub fn from_length_value(radix: u8, length: &Count, value: &Count) -> Result<Word, WordError> {
        let body = if let Some(v) = value.literal() {
            let digits = if v.is_zero() {
                Vec::new()
            } else {
                v.to_radix_be(radix as u32)
            };
            Word::from_digits(radix, &digits)?
        } else {
            let single = match value.terms() {
                [t] if value
                    .checked_sub(&Count::from_term(t.clone()))
                    .is_ok_and(|r| r.is_zero()) =>
                {
                    Some(t)
                }
                _ => None,
            };
            match single.map(Term::kind) {
                Some(TermKind::Value(w)) if w.radix == radix => w.clone(),
                _ => return Err(CountError::Undecided("value is not a single word value").into()),
            }
        };
        let zeros = length.checked_sub(&body.len)?;
        let mut w = Word::empty(radix);
        w.push_run(0, &zeros);
        Ok(w.concat(&body))
    }

    /// The value modulo `modulus`.
    pub fn value_residue(&self, modulus: &BigUint) -> Result<BigUint, CountError> {
        let k = self.radix as u64;
        let bits = modulus.bits();
        if (BigUint::from(k).pow(bits as u32) % modulus).is_zero() {
            // only the last `bits` digits matter
            let (mut v, mut place, mut left) = (BigUint::zero(), BigUint::one(), bits);
            for r in self.runs.iter().rev() {
                let take = r.count.to_u64().map_or(left, |c| c.min(left));
                for _ in 0..take {
                    v += &place * r.digit as u32;
                    place *= k;
                }
                left -= take;
                if left == 0 {
                    break;
                }
            }
            return Ok(v % modulus);
        }
        let wide = modulus * (k - 1);
        let mut v = BigUint::zero();
        for r in &self.runs {
            let p = pow_mod(k, &r.count, &wide)?;
            let repunit = ((&p + &wide - BigUint::one()) % &wide) / (k - 1);
            v = (v * (&p % modulus) + BigUint::from(r.digit) * repunit) % modulus;
        }
        Ok(v)
    }

    pub(crate) fn key(&self) -> u128 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        let lo = h.finish();
        self.radix.hash(&mut h);
        (lo as u128) << 64 | h.finish() as u128
    }

    pub(crate) fn render(&self, printer: &mut CountPrinter) -> String {
        let mut out = String::new();
        for r in &self.runs {
            match r.count.to_u64() {
                Some(c) if c <= INLINE_RUN => {
                    for _ in 0..c {
                        out.push(char::from_digit(r.digit as u32, 36).unwrap());
                    }
                }
                _ => out.push_str(&format!("{{{}^{}}}", r.digit, printer.count(&r.count))),
            }
        }
        out
    }

    /// Text form using a shared printer, so symbolic counts can be named once.
    pub fn render_with(&self, printer: &mut CountPrinter) -> String {
        self.render(printer)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.radix == other.radix && self.runs == other.runs
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.radix.hash(state);
        for r in &self.runs {
            r.digit.hash(state);
            r.count.hash(state);
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&mut CountPrinter::default()))
    }
}

/// A value is at most `radix^len - 1`; exposed for tests of the literal fold.
pub fn literal_value(radix: u8, digits: &[u8]) -> BigUint {
    digits
        .iter()
        .fold(BigUint::zero(), |v, &d| v * radix as u32 + d as u32)
}
