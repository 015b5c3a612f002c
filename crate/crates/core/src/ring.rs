//! Exact arithmetic in the truncated ring of integer power series in
//! non-commuting variables `X_1..X_n`, modulo the ideal generated by
//! monomials containing `X_i` and monomials containing a variable twice.
//!
//! Every surviving monomial is a sequence of distinct indices taken from
//! `{1..n} \ {i}`, so the ring is finite-dimensional: a polynomial has at
//! most `sum_k (n-1)!/(n-1-k)!` terms. Monomials are ordered by degree
//! first, then lexicographically on their index sequences; "leading term"
//! and positivity of group elements are defined against this order.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// The variable context: number of components `n` and the excluded index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ctx {
    arity: u8,
    excluded: u8,
}

impl Ctx {
    pub fn new(arity: u8, excluded: u8) -> Result<Self> {
        if arity < 2 {
            return Err(Error::ArityTooSmall(arity));
        }
        if excluded == 0 || excluded > arity {
            return Err(Error::IndexOutOfRange { index: excluded, arity });
        }
        Ok(Ctx { arity, excluded })
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn excluded(&self) -> u8 {
        self.excluded
    }

    /// Checks that `j` names a variable of this ring.
    pub fn check_index(&self, j: u8) -> Result<()> {
        if j == 0 || j > self.arity {
            return Err(Error::IndexOutOfRange { index: j, arity: self.arity });
        }
        if j == self.excluded {
            return Err(Error::ExcludedIndex { index: j });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Ctx) -> Result<()> {
        if self != other {
            return Err(Error::ContextMismatch(
                self.arity,
                self.excluded,
                other.arity,
                other.excluded,
            ));
        }
        Ok(())
    }

    /// The available variable indices, in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.arity).filter(move |&j| j != self.excluded)
    }

    /// All nonempty non-repeating index sequences, shortest first, then
    /// lexicographic. This is the canonical row order of every table.
    pub fn sequences(&self) -> Vec<Vec<u8>> {
        use itertools::Itertools;
        let base: Vec<u8> = self.indices().collect();
        let mut out = Vec::new();
        for k in 1..=base.len() {
            let mut perms: Vec<Vec<u8>> =
                base.iter().copied().permutations(k).collect();
            perms.sort_unstable();
            out.extend(perms);
        }
        out
    }
}

/// A monomial `X_{i_1}..X_{i_k}`: a sequence of distinct indices, none equal
/// to the excluded one. The empty sequence is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u8; 14]>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(SmallVec::new())
    }

    /// Validates an index sequence against a context.
    pub fn new(indices: &[u8], ctx: &Ctx) -> Result<Self> {
        let mut seen = 0u64;
        for &j in indices {
            ctx.check_index(j)?;
            if seen & (1 << j) != 0 {
                return Err(Error::RepeatedIndex { index: j });
            }
            seen |= 1 << j;
        }
        Ok(Monomial(SmallVec::from_slice(indices)))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn contains(&self, j: u8) -> bool {
        self.0.contains(&j)
    }

    /// Concatenation, or `None` when an index would repeat.
    fn concat(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.iter().any(|j| self.0.contains(j)) {
            return None;
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Some(Monomial(v))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Degree first, then lexicographic on the index sequence.
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for j in &self.0 {
            write!(f, "X{j}")?;
        }
        Ok(())
    }
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow")
}

/// A sparse element of the ring, with nonzero integer coefficients keyed by
/// monomial. Equality is structural; the term map is always pruned.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    ctx: Ctx,
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero(ctx: Ctx) -> Self {
        Polynomial { ctx, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: Ctx, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(Monomial::unit(), c);
        }
        Polynomial { ctx, terms }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::constant(ctx, 1)
    }

    /// The single-variable polynomial `X_j`.
    pub fn variable(ctx: Ctx, j: u8) -> Result<Self> {
        ctx.check_index(j)?;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(SmallVec::from_slice(&[j])), 1);
        Ok(Polynomial { ctx, terms })
    }

    pub fn from_terms<I>(ctx: Ctx, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, i64)>,
    {
        let mut p = Polynomial::zero(ctx);
        for (indices, c) in it {
            let m = Monomial::new(&indices, &ctx)?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient_of_unit() == 1
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient_of_unit(&self) -> i64 {
        self.terms.get(&Monomial::unit()).copied().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = checked_add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// The coefficient of `X_I`; zero for absent monomials.
    pub fn coefficient(&self, indices: &[u8]) -> Result<i64> {
        let m = Monomial::new(indices, &self.ctx)?;
        Ok(self.terms.get(&m).copied().unwrap_or(0))
    }

    pub fn coefficient_of(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The minimal nonconstant term in degree-then-lex order, if any.
    pub fn leading_term(&self) -> Option<(&Monomial, i64)> {
        self.terms
            .iter()
            .find(|(m, _)| !m.is_unit())
            .map(|(m, &c)| (m, c))
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        self.ctx.check_same(&rhs.ctx).expect("ring context mismatch");
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), c.checked_neg().expect("coefficient overflow")))
            .collect();
        Polynomial { ctx: self.ctx, terms }
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: i64) -> Polynomial {
        if k == 0 {
            return Polynomial::zero(self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), checked_mul(c, k)))
            .collect();
        Polynomial { ctx: self.ctx, terms }
    }

    /// Non-commutative product; product monomials with a repeated index die.
    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        self.ctx.check_same(&rhs.ctx).expect("ring context mismatch");
        let mut out = Polynomial::zero(self.ctx);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &rhs.terms {
                if let Some(m) = m1.concat(m2) {
                    out.add_term(m, checked_mul(c1, c2));
                }
            }
        }
        out
    }

    /// Inverse of a unit (constant term `+-1`), by the truncating geometric
    /// series: nilpotency bounds the number of rounds by the arity.
    pub fn unit_inverse(&self) -> Result<Polynomial> {
        let c0 = self.coefficient_of_unit();
        if c0 != 1 && c0 != -1 {
            return Err(Error::NotAUnit);
        }
        // self = c0 (1 + v) with v constant-free; inverse = c0 (1 - v + v^2 - ..).
        let v = self.scale(c0).sub(&Polynomial::one(self.ctx));
        let mut acc = Polynomial::one(self.ctx);
        let mut pow = Polynomial::one(self.ctx);
        let mut sign = -1;
        for _ in 0..self.ctx.arity {
            pow = pow.mul(&v);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale(sign));
            sign = -sign;
        }
        Ok(acc.scale(c0))
    }

    /// Replaces every occurrence of `X_j` by `X_j + X_j U - U X_j`, then
    /// expands and truncates. `U` must be constant-free.
    pub fn substitute(&self, j: u8, u: &Polynomial) -> Result<Polynomial> {
        self.ctx.check_index(j)?;
        self.ctx.check_same(u.ctx())?;
        if u.coefficient_of_unit() != 0 {
            return Err(Error::SubstitutionNotReduced);
        }
        let xj = Polynomial::variable(self.ctx, j)?;
        let replacement = xj.add(&xj.mul(u)).sub(&u.mul(&xj));
        let mut out = Polynomial::zero(self.ctx);
        for (m, &c) in &self.terms {
            // An index occurs at most once per monomial.
            match m.indices().iter().position(|&k| k == j) {
                None => out.add_term(m.clone(), c),
                Some(p) => {
                    let before = Monomial::new(&m.indices()[..p], &self.ctx)?;
                    let after = Monomial::new(&m.indices()[p + 1..], &self.ctx)?;
                    let mut left = Polynomial::zero(self.ctx);
                    left.add_term(before, c);
                    let mut right = Polynomial::zero(self.ctx);
                    right.add_term(after, 1);
                    out = out.add(&left.mul(&replacement).mul(&right));
                }
            }
        }
        Ok(out)
    }

    /// `D_P(I)`: the gcd of the coefficients of all nonempty proper
    /// order-preserving subsequences of `I`. Empty set of subsequences, or
    /// all-zero coefficients, give 0.
    pub fn indeterminacy(&self, indices: &[u8]) -> Result<u64> {
        let m = Monomial::new(indices, &self.ctx)?;
        let k = m.degree();
        let mut g: u64 = 0;
        // Bitmask subsequences, excluding the empty and the full one.
        for mask in 1..((1u32 << k) - 1).max(1) {
            let sub: SmallVec<[u8; 14]> = m
                .indices()
                .iter()
                .enumerate()
                .filter(|(pos, _)| mask & (1 << pos) != 0)
                .map(|(_, &j)| j)
                .collect();
            let c = self.terms.get(&Monomial(sub)).copied().unwrap_or(0);
            g = g.gcd(&c.unsigned_abs());
        }
        Ok(g)
    }

    /// The residue class of the coefficient of `X_I` modulo `D_P(I)`.
    pub fn residue(&self, indices: &[u8]) -> Result<Residue> {
        let value = self.coefficient(indices)?;
        let modulus = self.indeterminacy(indices)?;
        Ok(Residue::new(value, modulus))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}{m}")?;
            }
        }
        Ok(())
    }
}

/// A residue class: `modulus == 0` leaves the value unreduced, otherwise the
/// value is canonicalized into `0..modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    value: i64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        let value = if modulus == 0 {
            value
        } else {
            value.rem_euclid(modulus as i64)
        };
        Residue { value, modulus }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero_mod_zero(&self) -> bool {
        self.value == 0 && self.modulus == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} mod {}", self.value, self.modulus)
        }
    }
}
