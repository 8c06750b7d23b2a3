//! Exact natural numbers that may be far too large to write out.
//!
//! A [`Count`] is a literal plus a multiset of symbolic terms. A term is either
//! the diagonal pairing of two counts or the numeric value of a digit word, and
//! every term is at least `2^LITERAL_BITS`: smaller results are always folded
//! into the literal. Equality, subtraction and comparison work structurally;
//! a question the structure cannot settle is reported as
//! [`CountError::Undecided`], never guessed.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex, Weak};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::word::Word;

/// Pairing results and word values at or above `2^LITERAL_BITS` stay symbolic.
pub const LITERAL_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("symbolic comparison cannot be decided: {0}")]
    Undecided(&'static str),
    #[error("subtraction would go below zero")]
    Negative,
    #[error("modulus {0} has a prime factor too large to handle")]
    UnsupportedModulus(BigUint),
}

#[derive(Clone)]
pub struct Count {
    terms: Vec<Term>,
    literal: BigInt,
}

#[derive(Clone)]
pub struct Term(Arc<TermNode>);

struct TermNode {
    kind: TermKind,
    key: u128,
    residues: Mutex<HashMap<BigUint, BigUint>>,
    // small moduli are hit far more often; a short scan beats hashing
    small: Mutex<Vec<(u64, u64)>>,
}

#[derive(PartialEq, Eq)]
pub enum TermKind {
    /// `π(x, y) = (x+y)(x+y+1)/2 + y`.
    Pair(Count, Count),
    /// Numeric value of a word with no leading zero digit.
    Value(Word),
}

fn threshold() -> BigInt {
    BigInt::one() << LITERAL_BITS
}

fn salted_hash<T: Hash>(salt: u64, value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    salt.hash(&mut h);
    value.hash(&mut h);
    h.finish()
}

fn wide_hash<T: Hash>(value: &T) -> u128 {
    (salted_hash(0x9e37_79b9, value) as u128) << 64 | salted_hash(0x7f4a_7c15, value) as u128
}

// Hash-consing table: structurally equal terms share one node, so term
// equality is pointer equality and residue caches are shared too.
struct Interner {
    nodes: HashMap<u128, Vec<Weak<TermNode>>>,
    sweep_at: usize,
}

static INTERNER: LazyLock<Mutex<Interner>> = LazyLock::new(|| {
    Mutex::new(Interner {
        nodes: HashMap::new(),
        sweep_at: 1024,
    })
});

impl Term {
    pub(crate) fn new(kind: TermKind) -> Term {
        let key = match &kind {
            TermKind::Pair(x, y) => wide_hash(&("pair", x.key(), y.key())),
            TermKind::Value(w) => wide_hash(&("value", w.key())),
        };
        let mut table = INTERNER.lock().unwrap();
        if let Some(bucket) = table.nodes.get(&key) {
            // children are interned already, so this comparison is shallow
            if let Some(node) = bucket
                .iter()
                .filter_map(Weak::upgrade)
                .find(|n| n.kind == kind)
            {
                return Term(node);
            }
        }
        let node = Arc::new(TermNode {
            kind,
            key,
            residues: Mutex::new(HashMap::new()),
            small: Mutex::new(Vec::new()),
        });
        table
            .nodes
            .entry(key)
            .or_default()
            .push(Arc::downgrade(&node));
        if table.nodes.len() >= table.sweep_at {
            table.nodes.retain(|_, bucket| {
                bucket.retain(|w| w.strong_count() > 0);
                !bucket.is_empty()
            });
            table.sweep_at = (table.nodes.len() * 2).max(1024);
        }
        Term(node)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn key(&self) -> u128 {
        self.0.key
    }

    /// Stable identity for sharing-aware printing.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn residue_small(&self, modulus: u64) -> Result<u64, CountError> {
        if let Some(&(_, r)) = self
            .0
            .small
            .lock()
            .unwrap()
            .iter()
            .find(|(m, _)| *m == modulus)
        {
            return Ok(r);
        }
        let r = self
            .residue(&BigUint::from(modulus))?
            .to_u64()
            .expect("residue below modulus");
        self.0.small.lock().unwrap().push((modulus, r));
        Ok(r)
    }

    fn residue(&self, modulus: &BigUint) -> Result<BigUint, CountError> {
        if let Some(r) = self.0.residues.lock().unwrap().get(modulus) {
            return Ok(r.clone());
        }
        let r = match &self.0.kind {
            TermKind::Pair(x, y) => {
                // one modulus per level keeps the residue caches shared
                let double = modulus * 2u32;
                let ry = y.residue(&double)?;
                let s = (x.residue(&double)? + &ry) % &double;
                let tri = (&s * (&s + 1u32)) / 2u32;
                (tri + ry) % modulus
            }
            TermKind::Value(w) => w.value_residue(modulus)?,
        };
        self.0
            .residues
            .lock()
            .unwrap()
            .insert(modulus.clone(), r.clone());
        Ok(r)
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Term {}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", CountPrinter::default().term(self))
    }
}

impl Count {
    pub fn zero() -> Count {
        Count {
            terms: Vec::new(),
            literal: BigInt::zero(),
        }
    }

    pub fn from_u64(n: u64) -> Count {
        Count {
            terms: Vec::new(),
            literal: BigInt::from(n),
        }
    }

    pub fn from_biguint(n: BigUint) -> Count {
        Count {
            terms: Vec::new(),
            literal: BigInt::from(n),
        }
    }

    pub(crate) fn from_term(t: Term) -> Count {
        Count {
            terms: vec![t],
            literal: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.literal.is_zero()
    }

    pub fn is_literal(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The value when no symbolic term is present.
    pub fn literal(&self) -> Option<BigUint> {
        if self.terms.is_empty() {
            self.literal.to_biguint()
        } else {
            None
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.literal().and_then(|n| n.to_u64())
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.literal().and_then(|n| n.to_usize())
    }

    pub(crate) fn key(&self) -> u128 {
        let keys: Vec<u128> = self.terms.iter().map(Term::key).collect();
        wide_hash(&(keys, self.literal.to_signed_bytes_le()))
    }

    pub fn add(&self, other: &Count) -> Count {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.key() <= b.key(),
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else {
                terms.push(other.terms[j].clone());
                j += 1;
            }
        }
        Count {
            terms,
            literal: &self.literal + &other.literal,
        }
    }

    pub fn add_u64(&self, n: u64) -> Count {
        Count {
            terms: self.terms.clone(),
            literal: &self.literal + n,
        }
    }

    /// Splits both sides into their common terms and the terms left over.
    fn cancel(&self, other: &Count) -> (Vec<Term>, Vec<Term>) {
        let mut left = self.terms.clone();
        let mut right = Vec::new();
        for t in &other.terms {
            match left.iter().position(|s| s == t) {
                Some(p) => {
                    left.remove(p);
                }
                None => right.push(t.clone()),
            }
        }
        (left, right)
    }

    pub fn checked_sub(&self, other: &Count) -> Result<Count, CountError> {
        let (left, right) = self.cancel(other);
        if !right.is_empty() {
            return Err(CountError::Undecided(
                "subtrahend has terms the minuend lacks",
            ));
        }
        let literal = &self.literal - &other.literal;
        if left.is_empty() {
            if literal.is_negative() {
                return Err(CountError::Negative);
            }
        } else if literal.abs() >= threshold() {
            return Err(CountError::Undecided(
                "literal offset rivals a symbolic term",
            ));
        }
        Ok(Count {
            terms: left,
            literal,
        })
    }

    pub fn checked_sub_u64(&self, n: u64) -> Result<Count, CountError> {
        self.checked_sub(&Count::from_u64(n))
    }

    pub fn try_cmp(&self, other: &Count) -> Result<Ordering, CountError> {
        let (left, right) = self.cancel(other);
        let diff = &self.literal - &other.literal;
        match (left.is_empty(), right.is_empty()) {
            (true, true) => Ok(diff.cmp(&BigInt::zero())),
            (false, true) => {
                let floor = threshold() * BigInt::from(left.len());
                if diff.abs() < floor {
                    Ok(Ordering::Greater)
                } else {
                    Err(CountError::Undecided(
                        "literal offset rivals a symbolic term",
                    ))
                }
            }
            (true, false) => {
                let floor = threshold() * BigInt::from(right.len());
                if diff.abs() < floor {
                    Ok(Ordering::Less)
                } else {
                    Err(CountError::Undecided(
                        "literal offset rivals a symbolic term",
                    ))
                }
            }
            (false, false) => Err(CountError::Undecided(
                "distinct symbolic terms on both sides",
            )),
        }
    }

    pub fn cmp_u64(&self, n: u64) -> Result<Ordering, CountError> {
        self.try_cmp(&Count::from_u64(n))
    }

    pub fn min<'a>(&'a self, other: &'a Count) -> Result<&'a Count, CountError> {
        Ok(if self.try_cmp(other)? == Ordering::Greater {
            other
        } else {
            self
        })
    }

    /// Diagonal pairing `π(x, y) = (x+y)(x+y+1)/2 + y`.
    pub fn pair(x: &Count, y: &Count) -> Count {
        if let (Some(a), Some(b)) = (x.literal(), y.literal()) {
            let p = pair_literal(&a, &b);
            if p.bits() < LITERAL_BITS {
                return Count::from_biguint(p);
            }
        }
        Count::from_term(Term::new(TermKind::Pair(x.clone(), y.clone())))
    }

    pub fn unpair(&self) -> Result<(Count, Count), CountError> {
        if let Some(n) = self.literal() {
            let (x, y) = unpair_literal(&n);
            return Ok((Count::from_biguint(x), Count::from_biguint(y)));
        }
        match (self.terms.as_slice(), self.literal.is_zero()) {
            ([t], true) => match t.kind() {
                TermKind::Pair(x, y) => Ok((x.clone(), y.clone())),
                TermKind::Value(_) => Err(CountError::Undecided("value term is not a pairing")),
            },
            _ => Err(CountError::Undecided(
                "sum of terms is not a single pairing",
            )),
        }
    }

    pub fn residue(&self, modulus: &BigUint) -> Result<BigUint, CountError> {
        assert!(!modulus.is_zero(), "residue modulo zero");
        let m = BigInt::from(modulus.clone());
        let mut acc = self
            .literal
            .mod_floor(&m)
            .to_biguint()
            .expect("nonnegative residue");
        for t in &self.terms {
            acc = (acc + t.residue(modulus)?) % modulus;
        }
        Ok(acc)
    }

    pub fn residue_u64(&self, modulus: u64) -> Result<u64, CountError> {
        assert!(modulus != 0, "residue modulo zero");
        let m = modulus as u128;
        let mut acc = self
            .literal
            .mod_floor(&BigInt::from(modulus))
            .to_u64()
            .expect("nonnegative residue") as u128;
        for t in &self.terms {
            acc = (acc + t.residue_small(modulus)? as u128) % m;
        }
        Ok(acc as u64)
    }
}

pub fn pair_literal(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn unpair_literal(n: &BigUint) -> (BigUint, BigUint) {
    let w = ((n * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = n - t;
    let x = &w - &y;
    (x, y)
}

pub fn pair_u64(x: u64, y: u64) -> u64 {
    let s = x + y;
    s * (s + 1) / 2 + y
}

impl PartialEq for Count {
    fn eq(&self, other: &Self) -> bool {
        self.literal == other.literal
            && self.terms.len() == other.terms.len()
            && self.cancel(other).0.is_empty()
    }
}

impl Eq for Count {}

impl Hash for Count {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl From<u64> for Count {
    fn from(n: u64) -> Self {
        Count::from_u64(n)
    }
}

impl From<usize> for Count {
    fn from(n: usize) -> Self {
        Count::from_u64(n as u64)
    }
}

impl fmt::Debug for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", CountPrinter::default().count(self))
    }
}

/// Prints counts, naming each symbolic term once so shared structure is not
/// expanded repeatedly. Definitions are collected for the caller to emit.
/// Without naming, terms nested deeper than `UNNAMED_DEPTH` are elided.
#[derive(Default)]
pub struct CountPrinter {
    names: HashMap<usize, String>,
    pending: Vec<String>,
    named: bool,
    depth: usize,
}

const UNNAMED_DEPTH: usize = 3;

impl CountPrinter {
    /// A printer that introduces `$n` names for symbolic terms.
    pub fn naming() -> Self {
        CountPrinter {
            named: true,
            ..Default::default()
        }
    }

    pub fn count(&mut self, c: &Count) -> String {
        let mut parts: Vec<String> = c.terms.iter().map(|t| self.term(t)).collect();
        if !c.literal.is_zero() || parts.is_empty() {
            if c.literal.sign() == Sign::Minus && !parts.is_empty() {
                let last = parts.pop().unwrap_or_default();
                parts.push(format!("{last}-{}", c.literal.abs()));
            } else {
                parts.push(c.literal.to_string());
            }
        }
        parts.join("+")
    }

    pub fn term(&mut self, t: &Term) -> String {
        if let Some(name) = self.names.get(&t.id()) {
            return name.clone();
        }
        if !self.named && self.depth >= UNNAMED_DEPTH {
            return match t.kind() {
                TermKind::Pair(..) => "p(…)".into(),
                TermKind::Value(_) => "v(…)".into(),
            };
        }
        self.depth += 1;
        let body = match t.kind() {
            TermKind::Pair(x, y) => format!("p({},{})", self.count(x), self.count(y)),
            TermKind::Value(w) => format!("v({})", w.render(self)),
        };
        self.depth -= 1;
        if !self.named {
            return body;
        }
        let name = format!("${}", self.names.len() + 1);
        self.pending.push(format!("{name} = {body}"));
        self.names.insert(t.id(), name.clone());
        name
    }

    /// Definitions introduced since the last call, oldest first.
    pub fn take_definitions(&mut self) -> Vec<String> {
        std::mem::take(&mut self.pending)
    }
}

/// Carmichael function and the largest prime exponent of `n`.
pub(crate) fn carmichael(n: &BigUint) -> Result<(BigUint, u32), CountError> {
    let mut rest = n.clone();
    let mut lambda = BigUint::one();
    let mut max_exp = 0u32;
    let mut p = 2u64;
    while rest > BigUint::one() {
        if BigUint::from(p) * BigUint::from(p) > rest {
            // remaining cofactor is prime
            let q = rest.clone();
            lambda = lambda.lcm(&(&q - 1u32));
            max_exp = max_exp.max(1);
            break;
        }
        if p > 1_000_000 {
            return Err(CountError::UnsupportedModulus(n.clone()));
        }
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            let pb = BigUint::from(p);
            let part = if p == 2 && e >= 3 {
                BigUint::one() << (e - 2)
            } else {
                pb.pow(e - 1) * (&pb - 1u32)
            };
            lambda = lambda.lcm(&part);
            max_exp = max_exp.max(e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Ok((lambda, max_exp))
}

/// `base^exponent mod modulus` for a possibly symbolic exponent.
pub(crate) fn pow_mod(
    base: u64,
    exponent: &Count,
    modulus: &BigUint,
) -> Result<BigUint, CountError> {
    if modulus.is_one() {
        return Ok(BigUint::zero());
    }
    let b = BigUint::from(base);
    let bits = modulus.bits();
    let literal = exponent.literal();
    // symbolic exponents exceed every prime exponent of the modulus
    let large = literal.as_ref().is_none_or(|e| *e >= BigUint::from(bits));
    if large && (b.pow(bits as u32) % modulus).is_zero() {
        return Ok(BigUint::zero());
    }
    if let Some(e) = literal {
        return Ok(b.modpow(&e, modulus));
    }
    let (lambda, max_exp) = carmichael(modulus)?;
    let r = exponent.residue(&lambda)?;
    let t = BigUint::from(max_exp);
    let shift = ((r + &lambda) - (&t % &lambda)) % &lambda;
    Ok(b.modpow(&(t + shift), modulus))
}
