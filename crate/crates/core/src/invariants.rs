//! The invariant pipeline for link map presentations.
//!
//! A presentation lists, per component `i`, the signed singularity words
//! `(eps(p), g_p)` read off the self-intersections of that component. From
//! these the pipeline computes the based group-ring invariant `S_i`, its
//! expansion `E_i`, the numerical residues `kappa-tilde(I; i)`, the
//! multiset invariants `K_i` and `K(I; i)`, the covering-space expansion
//! `sigma_i`, and the classical 2-component Kirk pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ctx, Monomial, Polynomial, Residue};
use crate::word::{Word, WordExpr};

/// One self-intersection: its sign and the class of its based loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Singularity {
    pub sign: i8,
    pub word: WordExpr,
}

impl Singularity {
    pub fn new(sign: i8, word: WordExpr) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidSign(sign));
        }
        Ok(Singularity { sign, word })
    }
}

/// A link map presentation: `n` components, each carrying a list of signed
/// singularity words over the other components' meridians.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    arity: u8,
    components: Vec<Vec<Singularity>>,
}

fn expr_gens(e: &WordExpr, out: &mut BTreeSet<u8>) {
    match e {
        WordExpr::Gen(g) => {
            out.insert(*g);
        }
        WordExpr::Product(items) => items.iter().for_each(|e| expr_gens(e, out)),
        WordExpr::Inverse(e) | WordExpr::Power(e, _) => expr_gens(e, out),
        WordExpr::Conjugate(a, b) | WordExpr::Commutator(a, b) => {
            expr_gens(a, out);
            expr_gens(b, out);
        }
    }
}

impl Presentation {
    pub fn new(arity: u8, components: Vec<Vec<Singularity>>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::ArityTooSmall(arity));
        }
        if components.len() != arity as usize {
            return Err(Error::MalformedDiagram(format!(
                "expected {} component lists, got {}",
                arity,
                components.len()
            )));
        }
        let p = Presentation { arity, components };
        p.validate()?;
        Ok(p)
    }

    pub fn empty(arity: u8) -> Result<Self> {
        Self::new(arity, vec![Vec::new(); arity as usize])
    }

    fn validate(&self) -> Result<()> {
        for (idx, sings) in self.components.iter().enumerate() {
            let i = (idx + 1) as u8;
            for s in sings {
                if s.sign != 1 && s.sign != -1 {
                    return Err(Error::InvalidSign(s.sign));
                }
                let mut gens = BTreeSet::new();
                expr_gens(&s.word, &mut gens);
                for g in gens {
                    if g == 0 || g > self.arity {
                        return Err(Error::IndexOutOfRange { index: g, arity: self.arity });
                    }
                    if g == i {
                        return Err(Error::WordUsesOwnMeridian { component: i, gen: g });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    /// The ring context used for invariants of component `i`.
    pub fn ctx_for(&self, i: u8) -> Result<Ctx> {
        if i == 0 || i > self.arity {
            return Err(Error::ComponentOutOfRange { component: i, arity: self.arity });
        }
        Ctx::new(self.arity, i)
    }

    pub fn component(&self, i: u8) -> Result<&[Singularity]> {
        if i == 0 || i > self.arity {
            return Err(Error::ComponentOutOfRange { component: i, arity: self.arity });
        }
        Ok(&self.components[i as usize - 1])
    }

    pub fn components(&self) -> impl Iterator<Item = (u8, &[Singularity])> + '_ {
        self.components
            .iter()
            .enumerate()
            .map(|(idx, s)| ((idx + 1) as u8, s.as_slice()))
    }

    /// Replaces the meridian `x_j` by its conjugate `g^-1 x_j g` in every
    /// word that mentions it. Each affected component excludes its own
    /// meridian, so `g` must avoid it there.
    pub fn basing_change(&self, j: u8, g: &WordExpr) -> Result<Presentation> {
        if j == 0 || j > self.arity {
            return Err(Error::ComponentOutOfRange { component: j, arity: self.arity });
        }
        let mut g_gens = BTreeSet::new();
        expr_gens(g, &mut g_gens);
        if let Some(&bad) = g_gens.iter().find(|&&x| x == 0 || x > self.arity) {
            return Err(Error::IndexOutOfRange { index: bad, arity: self.arity });
        }
        let replacement = WordExpr::conjugate(WordExpr::Gen(j), g.clone());
        let mut components = Vec::with_capacity(self.components.len());
        for (idx, sings) in self.components.iter().enumerate() {
            let i = (idx + 1) as u8;
            let mut out = Vec::with_capacity(sings.len());
            for s in sings {
                if s.word.mentions(j) {
                    if g_gens.contains(&i) {
                        return Err(Error::BasingWordUsesExcluded { component: i, gen: i });
                    }
                    out.push(Singularity {
                        sign: s.sign,
                        word: s.word.substitute_gen(j, &replacement),
                    });
                } else {
                    out.push(s.clone());
                }
            }
            components.push(out);
        }
        Presentation::new(self.arity, components)
    }

    /// Conjugates every singularity word of component `i` by `gamma`,
    /// which must avoid the meridian `x_i`.
    pub fn rebase_component(&self, i: u8, gamma: &WordExpr) -> Result<Presentation> {
        if i == 0 || i > self.arity {
            return Err(Error::ComponentOutOfRange { component: i, arity: self.arity });
        }
        let mut gens = BTreeSet::new();
        expr_gens(gamma, &mut gens);
        if let Some(&bad) = gens.iter().find(|&&x| x == 0 || x > self.arity) {
            return Err(Error::IndexOutOfRange { index: bad, arity: self.arity });
        }
        if gens.contains(&i) {
            return Err(Error::BasingWordUsesExcluded { component: i, gen: i });
        }
        let mut components = self.components.clone();
        for s in &mut components[i as usize - 1] {
            s.word = WordExpr::conjugate(s.word.clone(), gamma.clone());
        }
        Presentation::new(self.arity, components)
    }
}

/// An aggregated group-ring sum: nonzero integer multiplicities keyed by
/// the Magnus expansion of a nontrivial positive element, each with one
/// witnessing word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    ctx: Ctx,
    entries: BTreeMap<Polynomial, (i64, Word)>,
}

impl GroupRingElement {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Entries as `(expansion, multiplicity, witness)`, in expansion order.
    pub fn entries(&self) -> impl Iterator<Item = (&Polynomial, i64, &Word)> + '_ {
        self.entries.iter().map(|(e, (rho, w))| (e, *rho, w))
    }
}

/// The based invariant `S_i`: signed singularity words, each positive-
/// normalized, aggregated by their class in the reduced free group.
/// Trivial classes and cancelled aggregates are dropped.
pub fn s_invariant(p: &Presentation, i: u8) -> Result<GroupRingElement> {
    let ctx = p.ctx_for(i)?;
    let mut entries: BTreeMap<Polynomial, (i64, Word)> = BTreeMap::new();
    for s in p.component(i)? {
        let raw = s.word.flatten(ctx)?;
        let (g, _inverted) = raw.positive_normalize();
        let expansion = g.magnus_expand();
        if expansion.is_one() {
            continue;
        }
        let entry = entries.entry(expansion).or_insert((0, g));
        entry.0 += i64::from(s.sign);
    }
    entries.retain(|_, (rho, _)| *rho != 0);
    Ok(GroupRingElement { ctx, entries })
}

/// `E_i(L)`: the expansion of `S_i`, i.e. the sum of `rho(g) (E(g) - 1)`.
pub fn e_invariant(p: &Presentation, i: u8) -> Result<Polynomial> {
    let si = s_invariant(p, i)?;
    let one = Polynomial::one(*si.ctx());
    let mut acc = Polynomial::zero(*si.ctx());
    for (expansion, rho, _) in si.entries() {
        acc = acc.add(&expansion.sub(&one).scale(rho));
    }
    Ok(acc)
}

/// The residue of the coefficient of `X_I` in `E_i(L)` modulo its
/// indeterminacy.
pub fn kappa_tilde(p: &Presentation, i: u8, sequence: &[u8]) -> Result<Residue> {
    e_invariant(p, i)?.residue(sequence)
}

/// One entry of the multiset invariant: the multiplicity of a positive
/// class, its residue payload over all nonempty sequences, and the nonzero
/// moduli. The witness word is carried for reporting only and is ignored by
/// equality and ordering.
#[derive(Debug, Clone)]
pub struct KEntry {
    rho: i64,
    payload: Polynomial,
    moduli: BTreeMap<Monomial, u64>,
    witness: Word,
}

impl KEntry {
    pub fn rho(&self) -> i64 {
        self.rho
    }

    pub fn payload(&self) -> &Polynomial {
        &self.payload
    }

    pub fn moduli(&self) -> &BTreeMap<Monomial, u64> {
        &self.moduli
    }

    pub fn witness(&self) -> &Word {
        &self.witness
    }
}

impl PartialEq for KEntry {
    fn eq(&self, other: &Self) -> bool {
        self.rho == other.rho && self.payload == other.payload && self.moduli == other.moduli
    }
}

impl Eq for KEntry {}

impl PartialOrd for KEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rho
            .cmp(&other.rho)
            .then_with(|| self.payload.cmp(&other.payload))
            .then_with(|| self.moduli.cmp(&other.moduli))
    }
}

impl fmt::Display for KEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rho, self.payload)
    }
}

/// The multiset `K_i`: one entry per contributing positive class, with
/// duplicates retained and a canonical sort order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMultiset {
    entries: Vec<KEntry>,
}

impl KMultiset {
    pub fn entries(&self) -> &[KEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `(rho, payload)` pairs alone, without moduli.
    pub fn pairs(&self) -> Vec<(i64, String)> {
        self.entries
            .iter()
            .map(|e| (e.rho, e.payload.to_string()))
            .collect()
    }
}

impl fmt::Display for KMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

pub fn k_multiset(p: &Presentation, i: u8) -> Result<KMultiset> {
    let si = s_invariant(p, i)?;
    let sequences = si.ctx().sequences();
    let mut entries = Vec::with_capacity(si.len());
    for (expansion, rho, witness) in si.entries() {
        let mut payload = Polynomial::zero(*si.ctx());
        let mut payload_terms = Vec::new();
        let mut moduli = BTreeMap::new();
        for seq in &sequences {
            let r = expansion.residue(seq)?;
            if r.value() != 0 {
                payload_terms.push((seq.clone(), r.value()));
            }
            if r.modulus() != 0 {
                moduli.insert(Monomial::new(seq, si.ctx())?, r.modulus());
            }
        }
        if !payload_terms.is_empty() {
            payload = Polynomial::from_terms(*si.ctx(), payload_terms)?;
        }
        entries.push(KEntry { rho, payload, moduli, witness: witness.clone() });
    }
    entries.sort();
    Ok(KMultiset { entries })
}

/// The multiset `K(I; i)` restricted to a single sequence, in both the full
/// form (every contributing class) and the filtered form that drops entries
/// whose residue is 0 with modulus 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSequence {
    pub sequence: Vec<u8>,
    pub full: Vec<(i64, Residue)>,
    pub filtered: Vec<(i64, Residue)>,
}

pub fn k_sequence(p: &Presentation, i: u8, sequence: &[u8]) -> Result<KSequence> {
    let si = s_invariant(p, i)?;
    Monomial::new(sequence, si.ctx())?;
    let mut full = Vec::with_capacity(si.len());
    for (expansion, rho, _) in si.entries() {
        full.push((rho, expansion.residue(sequence)?));
    }
    full.sort();
    let filtered = full
        .iter()
        .copied()
        .filter(|(_, r)| !r.is_zero_mod_zero())
        .collect();
    Ok(KSequence { sequence: sequence.to_vec(), full, filtered })
}

/// The covering-space expansion: `-sum rho(g) (E(g)-1)(E(g^-1)-1)`.
pub fn sigma_covering(p: &Presentation, i: u8) -> Result<Polynomial> {
    let si = s_invariant(p, i)?;
    let one = Polynomial::one(*si.ctx());
    let mut acc = Polynomial::zero(*si.ctx());
    for (expansion, rho, witness) in si.entries() {
        let fwd = expansion.sub(&one);
        let bwd = witness.inverse().magnus_expand().sub(&one);
        acc = acc.sub(&fwd.mul(&bwd).scale(rho));
    }
    Ok(acc)
}

/// The classical 2-component Kirk pair, as exponent maps `{n_p -> sum eps}`
/// with all exponents at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KirkClassical {
    exponents: [BTreeMap<u32, i64>; 2],
}

impl KirkClassical {
    pub fn exponent_map(&self, i: u8) -> &BTreeMap<u32, i64> {
        &self.exponents[i as usize - 1]
    }

    /// The expanded polynomial `sum rho (t^m - 1)` as coefficients by
    /// exponent, constant term included.
    pub fn polynomial_map(&self, i: u8) -> BTreeMap<u32, i64> {
        let mut out: BTreeMap<u32, i64> = BTreeMap::new();
        for (&m, &rho) in self.exponent_map(i) {
            *out.entry(m).or_insert(0) += rho;
            *out.entry(0).or_insert(0) -= rho;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn polynomial_string(&self, i: u8) -> String {
        render_t_polynomial(&self.polynomial_map(i))
    }
}

impl fmt::Display for KirkClassical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.polynomial_string(1), self.polynomial_string(2))
    }
}

/// Renders an integer polynomial in `t`, positive terms before negative
/// ones, each group by increasing exponent.
fn render_t_polynomial(coeffs: &BTreeMap<u32, i64>) -> String {
    if coeffs.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    let ordered = coeffs
        .iter()
        .filter(|(_, &c)| c > 0)
        .chain(coeffs.iter().filter(|(_, &c)| c < 0));
    for (k, (&m, &c)) in ordered.enumerate() {
        let mag = c.unsigned_abs();
        if k == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let var = match m {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{m}"),
        };
        if var.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag == 1 {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{mag}{var}"));
        }
    }
    out
}

pub fn kirk_classical(p: &Presentation) -> Result<KirkClassical> {
    if p.arity() != 2 {
        return Err(Error::NotTwoComponents(p.arity()));
    }
    let mut exponents = [BTreeMap::new(), BTreeMap::new()];
    for i in 1..=2u8 {
        let other = 3 - i;
        let si = s_invariant(p, i)?;
        for (expansion, rho, _) in si.entries() {
            // a positive element of the rank-1 reduced group is x_other^m
            // with m >= 1, and its expansion is 1 + m X_other
            let m = expansion.coefficient(&[other])?;
            debug_assert!(m >= 1);
            *exponents[i as usize - 1].entry(m as u32).or_insert(0) += rho;
        }
        exponents[i as usize - 1].retain(|_, c| *c != 0);
    }
    Ok(KirkClassical { exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Residue;
    use crate::word::parse_word;

    fn pres(n: u8, comps: &[(u8, &[(i8, &str)])]) -> Presentation {
        let mut lists = vec![Vec::new(); n as usize];
        for (i, sings) in comps {
            let ctx = Ctx::new(n, *i).unwrap();
            for (sign, text) in sings.iter() {
                let word = parse_word(text, ctx).unwrap();
                lists[*i as usize - 1].push(Singularity::new(*sign, word).unwrap());
            }
        }
        Presentation::new(n, lists).unwrap()
    }

    fn y3_variant() -> Presentation {
        pres(
            3,
            &[(
                3,
                &[(1, "x1 x2^-1"), (-1, "x1"), (1, "x2 x1"), (-1, "x2 x1 x2^-1")],
            )],
        )
    }

    #[test]
    fn s_invariant_aggregates_and_cancels() {
        // a +/- pair on the same word cancels
        let p = pres(3, &[(3, &[(1, "x1 x2"), (-1, "x2^-1 (x2 x1 x2)")])]);
        assert!(s_invariant(&p, 3).unwrap().is_empty());

        // inverse input words normalize to the same positive element
        let p = pres(3, &[(3, &[(1, "x1"), (1, "x1^-1")])]);
        let si = s_invariant(&p, 3).unwrap();
        assert_eq!(si.len(), 1);
        let (_, rho, w) = si.entries().next().unwrap();
        assert_eq!(rho, 2);
        assert!(w.is_positive());

        // trivial words contribute nothing
        let p = pres(3, &[(3, &[(1, "x1 x1^-1")])]);
        assert!(s_invariant(&p, 3).unwrap().is_empty());
    }

    #[test]
    fn e_invariant_of_empty_presentation_is_zero() {
        let p = Presentation::empty(4).unwrap();
        for i in 1..=4 {
            assert!(e_invariant(&p, i).unwrap().is_zero());
        }
    }

    #[test]
    fn e_invariant_vanishes_on_the_four_singularity_example() {
        let p = y3_variant();
        assert!(e_invariant(&p, 3).unwrap().is_zero());
        for seq in [&[1u8][..], &[2], &[1, 2], &[2, 1]] {
            assert_eq!(kappa_tilde(&p, 3, seq).unwrap(), Residue::new(0, 0));
        }
    }

    #[test]
    fn k_sequence_full_and_filtered_views() {
        let p = y3_variant();
        let k1 = k_sequence(&p, 3, &[1]).unwrap();
        let expected: Vec<(i64, Residue)> = vec![
            (-1, Residue::new(1, 0)),
            (-1, Residue::new(1, 0)),
            (1, Residue::new(1, 0)),
            (1, Residue::new(1, 0)),
        ];
        assert_eq!(k1.full, expected);
        assert_eq!(k1.filtered, expected);

        let k2 = k_sequence(&p, 3, &[2]).unwrap();
        assert_eq!(
            k2.filtered,
            vec![(1, Residue::new(-1, 0)), (1, Residue::new(1, 0))]
        );
        assert_eq!(
            k2.full,
            vec![
                (-1, Residue::new(0, 0)),
                (-1, Residue::new(0, 0)),
                (1, Residue::new(-1, 0)),
                (1, Residue::new(1, 0)),
            ]
        );
    }

    #[test]
    fn k_multiset_retains_duplicates() {
        // the four-singularity example has two identical entries (-1, X1)
        let p = y3_variant();
        let k = k_multiset(&p, 3).unwrap();
        let pairs = k.pairs();
        assert_eq!(
            pairs,
            vec![
                (-1, "X1".to_string()),
                (-1, "X1".to_string()),
                (1, "X1 - X2".to_string()),
                (1, "X1 + X2".to_string()),
            ]
        );
        // degree-2 residues are killed by modulus 1 on every entry
        for e in k.entries() {
            assert_eq!(
                e.moduli().values().copied().collect::<Vec<_>>(),
                vec![1, 1]
            );
        }
        assert!(k_multiset(&Presentation::empty(3).unwrap(), 3)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn sigma_covering_kills_single_meridian() {
        let p = pres(3, &[(3, &[(1, "x1")])]);
        assert!(sigma_covering(&p, 3).unwrap().is_zero());
    }

    #[test]
    fn kirk_classical_frozen_values() {
        let fr = pres(2, &[(1, &[(-1, "x2")]), (2, &[(1, "x1")])]);
        let kirk = kirk_classical(&fr).unwrap();
        assert_eq!(kirk.polynomial_string(1), "1 - t");
        assert_eq!(kirk.polynomial_string(2), "t - 1");
        assert_eq!(kirk.to_string(), "(1 - t, t - 1)");

        let empty = Presentation::empty(2).unwrap();
        let kirk = kirk_classical(&empty).unwrap();
        assert_eq!(kirk.to_string(), "(0, 0)");

        let p = pres(2, &[(1, &[(1, "x2^2"), (-1, "x2")])]);
        let kirk = kirk_classical(&p).unwrap();
        assert_eq!(kirk.polynomial_string(1), "t^2 - t");
        assert_eq!(kirk.polynomial_string(2), "0");

        assert!(matches!(
            kirk_classical(&Presentation::empty(3).unwrap()),
            Err(Error::NotTwoComponents(3))
        ));
    }

    #[test]
    fn kirk_classical_matches_e_invariant_coefficient() {
        let p = pres(2, &[(1, &[(1, "x2^3"), (1, "x2"), (-1, "x2^2")])]);
        let kirk = kirk_classical(&p).unwrap();
        let total: i64 = kirk
            .exponent_map(1)
            .iter()
            .map(|(&m, &rho)| i64::from(m) * rho)
            .sum();
        assert_eq!(e_invariant(&p, 1).unwrap().coefficient(&[2]).unwrap(), total);
    }

    #[test]
    fn basing_change_identity_and_errors() {
        let p = y3_variant();
        let id = WordExpr::empty();
        let q = p.basing_change(1, &id).unwrap();
        assert_eq!(e_invariant(&q, 3).unwrap(), e_invariant(&p, 3).unwrap());

        // substituting x1 by a conjugate that uses x3 must fail where words
        // of component 3 mention x1
        let g = WordExpr::Gen(3);
        assert!(matches!(
            p.basing_change(1, &g),
            Err(Error::BasingWordUsesExcluded { component: 3, .. })
        ));
        // but it is fine when no word of component 3 is affected
        let p2 = pres(3, &[(3, &[(1, "x2")]), (2, &[(1, "x1")])]);
        assert!(p2.basing_change(1, &g).is_ok());
    }

    #[test]
    fn rebase_component_conjugates_words() {
        let p = pres(3, &[(3, &[(1, "x1")])]);
        let q = p.rebase_component(3, &WordExpr::Gen(2)).unwrap();
        let ctx = q.ctx_for(3).unwrap();
        let w = q.component(3).unwrap()[0].word.flatten(ctx).unwrap();
        let expected = parse_word("x2^-1 x1 x2", ctx).unwrap().flatten(ctx).unwrap();
        assert_eq!(w.letters(), expected.letters());

        // gamma may not use the meridian of the component it rebases
        assert!(matches!(
            p.rebase_component(3, &WordExpr::Gen(3)),
            Err(Error::BasingWordUsesExcluded { component: 3, .. })
        ));
        // identity rebasing keeps invariants
        let q = p.rebase_component(3, &WordExpr::empty()).unwrap();
        assert_eq!(
            k_sequence(&q, 3, &[1]).unwrap(),
            k_sequence(&p, 3, &[1]).unwrap()
        );
    }

    #[test]
    fn aggregation_soundness() {
        let p = y3_variant();
        let ctx = p.ctx_for(3).unwrap();
        let one = Polynomial::one(ctx);
        let mut raw = Polynomial::zero(ctx);
        for s in p.component(3).unwrap() {
            let (g, _) = s.word.flatten(ctx).unwrap().positive_normalize();
            raw = raw.add(&g.magnus_expand().sub(&one).scale(i64::from(s.sign)));
        }
        assert_eq!(raw, e_invariant(&p, 3).unwrap());
    }

    #[test]
    fn inserting_cancelling_pair_changes_nothing() {
        let base = y3_variant();
        let mut lists: Vec<Vec<Singularity>> = (1..=3)
            .map(|i| base.component(i).unwrap().to_vec())
            .collect();
        let ctx = Ctx::new(3, 3).unwrap();
        let w = parse_word("x2 x1^-1 x2", ctx).unwrap();
        lists[2].push(Singularity::new(1, w.clone()).unwrap());
        lists[2].push(Singularity::new(-1, w).unwrap());
        let p = Presentation::new(3, lists).unwrap();
        assert_eq!(k_multiset(&p, 3).unwrap(), k_multiset(&base, 3).unwrap());
        assert_eq!(
            kappa_tilde(&p, 3, &[1, 2]).unwrap(),
            kappa_tilde(&base, 3, &[1, 2]).unwrap()
        );
        assert_eq!(
            sigma_covering(&p, 3).unwrap(),
            sigma_covering(&base, 3).unwrap()
        );
    }
}
