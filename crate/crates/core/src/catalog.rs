//! Built-in link map families with their known invariant values, plus
//! cross-section fixtures for the diagram pipeline. The expected tables
//! double as the golden suite: `CatalogEntry::verify` recomputes every
//! listed value through the invariants pipeline.

use std::collections::BTreeMap;

use crate::diagram::{CrossSection, Crossing, DiagramArc, DiagramSpec, LoopSingularity, LoopSpec};
use crate::error::{Error, Result};
use crate::invariants::{
    e_invariant, k_multiset, k_sequence, kappa_tilde, kirk_classical, sigma_covering,
    Presentation, Singularity,
};
use crate::ring::Residue;
use crate::word::WordExpr;

/// An expected invariant value, checkable against the pipeline.
#[derive(Debug, Clone)]
pub enum Expected {
    /// The classical 2-component Kirk pair, rendered canonically.
    Kirk { pair: [&'static str; 2] },
    /// `kappa-tilde(sequence; component)` as `(value, modulus)`.
    KappaTilde { component: u8, sequence: Vec<u8>, value: i64, modulus: u64 },
    /// Every sequence of length at most `max_len` has residue 0 mod 0.
    KappaVanishesUpTo { component: u8, max_len: usize },
    /// Number of terms of `E_i(L)`.
    ETermCount { component: u8, count: usize },
    /// Every term of `E_i(L)` has this degree.
    EHomogeneous { component: u8, degree: usize },
    /// A single coefficient of `E_i(L)`.
    ECoefficient { component: u8, sequence: Vec<u8>, value: i64 },
    /// `E_i(L) = 0`.
    EZero { component: u8 },
    /// `K(sequence; component)` as sorted `(rho, value, modulus)` triples;
    /// `full` additionally pins the unfiltered multiset.
    KSeq {
        component: u8,
        sequence: Vec<u8>,
        filtered: Vec<(i64, i64, u64)>,
        full: Option<Vec<(i64, i64, u64)>>,
    },
    /// `K(I; component)` filtered is empty for every `I` of length at most
    /// `max_len`.
    KSeqTrivialUpTo { component: u8, max_len: usize },
    /// The `(rho, payload)` pairs of `K_i`, sorted.
    KPairs { component: u8, pairs: Vec<(i64, &'static str)> },
    /// `E_i(sigma_i(L)) = 0`.
    SigmaZero { component: u8 },
}

/// A named link map with its presentation and expected invariant table.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub summary: String,
    pub presentation: Presentation,
    pub expected: Vec<Expected>,
}

fn triples(pairs: &[(i64, Residue)]) -> Vec<(i64, i64, u64)> {
    pairs.iter().map(|(rho, r)| (*rho, r.value(), r.modulus())).collect()
}

impl CatalogEntry {
    /// Recomputes every expected value; returns one message per mismatch.
    pub fn verify(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let p = &self.presentation;
        let mut fail = |msg: String| failures.push(format!("{}: {}", self.name, msg));
        for exp in &self.expected {
            match exp {
                Expected::Kirk { pair } => match kirk_classical(p) {
                    Err(e) => fail(format!("kirk_classical failed: {e}")),
                    Ok(k) => {
                        for i in 1..=2u8 {
                            let got = k.polynomial_string(i);
                            if got != pair[i as usize - 1] {
                                fail(format!(
                                    "sigma_{i}: expected `{}`, got `{got}`",
                                    pair[i as usize - 1]
                                ));
                            }
                        }
                    }
                },
                Expected::KappaTilde { component, sequence, value, modulus } => {
                    match kappa_tilde(p, *component, sequence) {
                        Err(e) => fail(format!("kappa_tilde failed: {e}")),
                        Ok(r) => {
                            if r != Residue::new(*value, *modulus) {
                                fail(format!(
                                    "kappa_tilde({sequence:?};{component}): expected ({value}, {modulus}), got {r}"
                                ));
                            }
                        }
                    }
                }
                Expected::KappaVanishesUpTo { component, max_len } => {
                    let ctx = p.ctx_for(*component).expect("valid component");
                    for seq in ctx.sequences().iter().filter(|s| s.len() <= *max_len) {
                        match kappa_tilde(p, *component, seq) {
                            Err(e) => fail(format!("kappa_tilde failed: {e}")),
                            Ok(r) if !r.is_zero_mod_zero() => fail(format!(
                                "kappa_tilde({seq:?};{component}): expected (0, 0), got {r}"
                            )),
                            _ => {}
                        }
                    }
                }
                Expected::ETermCount { component, count } => {
                    match e_invariant(p, *component) {
                        Err(e) => fail(format!("e_invariant failed: {e}")),
                        Ok(e) if e.term_count() != *count => fail(format!(
                            "E_{component} term count: expected {count}, got {}",
                            e.term_count()
                        )),
                        _ => {}
                    }
                }
                Expected::EHomogeneous { component, degree } => {
                    match e_invariant(p, *component) {
                        Err(e) => fail(format!("e_invariant failed: {e}")),
                        Ok(e) => {
                            if e.terms().any(|(m, _)| m.degree() != *degree) {
                                fail(format!("E_{component} is not homogeneous of degree {degree}"));
                            }
                        }
                    }
                }
                Expected::ECoefficient { component, sequence, value } => {
                    match e_invariant(p, *component).and_then(|e| e.coefficient(sequence)) {
                        Err(e) => fail(format!("e_invariant failed: {e}")),
                        Ok(c) if c != *value => fail(format!(
                            "E_{component} coefficient at {sequence:?}: expected {value}, got {c}"
                        )),
                        _ => {}
                    }
                }
                Expected::EZero { component } => match e_invariant(p, *component) {
                    Err(e) => fail(format!("e_invariant failed: {e}")),
                    Ok(e) if !e.is_zero() => fail(format!("E_{component}: expected 0, got {e}")),
                    _ => {}
                },
                Expected::KSeq { component, sequence, filtered, full } => {
                    match k_sequence(p, *component, sequence) {
                        Err(e) => fail(format!("k_sequence failed: {e}")),
                        Ok(k) => {
                            if &triples(&k.filtered) != filtered {
                                fail(format!(
                                    "K({sequence:?};{component}) filtered: expected {filtered:?}, got {:?}",
                                    triples(&k.filtered)
                                ));
                            }
                            if let Some(full) = full {
                                if &triples(&k.full) != full {
                                    fail(format!(
                                        "K({sequence:?};{component}) full: expected {full:?}, got {:?}",
                                        triples(&k.full)
                                    ));
                                }
                            }
                        }
                    }
                }
                Expected::KSeqTrivialUpTo { component, max_len } => {
                    let ctx = p.ctx_for(*component).expect("valid component");
                    for seq in ctx.sequences().iter().filter(|s| s.len() <= *max_len) {
                        match k_sequence(p, *component, seq) {
                            Err(e) => fail(format!("k_sequence failed: {e}")),
                            Ok(k) if !k.filtered.is_empty() => fail(format!(
                                "K({seq:?};{component}) filtered: expected empty, got {:?}",
                                triples(&k.filtered)
                            )),
                            _ => {}
                        }
                    }
                }
                Expected::KPairs { component, pairs } => match k_multiset(p, *component) {
                    Err(e) => fail(format!("k_multiset failed: {e}")),
                    Ok(k) => {
                        let got = k.pairs();
                        let want: Vec<(i64, String)> =
                            pairs.iter().map(|(r, s)| (*r, s.to_string())).collect();
                        if got != want {
                            fail(format!("K_{component}: expected {want:?}, got {got:?}"));
                        }
                    }
                },
                Expected::SigmaZero { component } => match sigma_covering(p, *component) {
                    Err(e) => fail(format!("sigma_covering failed: {e}")),
                    Ok(s) if !s.is_zero() => {
                        fail(format!("sigma_{component}: expected 0, got {s}"))
                    }
                    _ => {}
                },
            }
        }
        failures
    }
}

fn gens(range: impl Iterator<Item = u8>) -> Vec<WordExpr> {
    range.map(WordExpr::Gen).collect()
}

fn presentation(n: u8, component: u8, sings: Vec<(i8, WordExpr)>) -> Presentation {
    let mut lists = vec![Vec::new(); n as usize];
    lists[component as usize - 1] = sings
        .into_iter()
        .map(|(sign, word)| Singularity::new(sign, word).expect("valid sign"))
        .collect();
    Presentation::new(n, lists).expect("catalog presentation validates")
}

/// The 2-component link map with one singularity per component and Kirk
/// pair `(1 - t, t - 1)`.
pub fn fenn_rolfsen() -> CatalogEntry {
    let mut lists = vec![Vec::new(), Vec::new()];
    lists[0].push(Singularity::new(-1, WordExpr::Gen(2)).unwrap());
    lists[1].push(Singularity::new(1, WordExpr::Gen(1)).unwrap());
    CatalogEntry {
        name: "fr".into(),
        summary: "2-component link map with Kirk pair (1 - t, t - 1)".into(),
        presentation: Presentation::new(2, lists).unwrap(),
        expected: vec![
            Expected::Kirk { pair: ["1 - t", "t - 1"] },
            Expected::KappaTilde { component: 1, sequence: vec![2], value: -1, modulus: 0 },
            Expected::KappaTilde { component: 2, sequence: vec![1], value: 1, modulus: 0 },
            Expected::SigmaZero { component: 1 },
            Expected::SigmaZero { component: 2 },
        ],
    }
}

/// The family whose component `n` carries one positive singularity with
/// the full nested commutator word on the other meridians.
pub fn y_family(n: u8) -> Result<CatalogEntry> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("y requires n >= 3, got {n}")));
    }
    let g = WordExpr::nested_commutator(&gens(1..n));
    let top: Vec<u8> = (1..n).collect();
    Ok(CatalogEntry {
        name: format!("y[{n}]"),
        summary: format!("{n}-component link map detected only in top degree"),
        presentation: presentation(n, n, vec![(1, g)]),
        expected: vec![
            Expected::KappaTilde {
                component: n,
                sequence: top.clone(),
                value: 1,
                modulus: 0,
            },
            Expected::KappaVanishesUpTo { component: n, max_len: n as usize - 2 },
            Expected::ETermCount { component: n, count: 1 << (n - 2) },
            Expected::EHomogeneous { component: n, degree: n as usize - 1 },
            Expected::ECoefficient { component: n, sequence: top.clone(), value: 1 },
            Expected::KSeq {
                component: n,
                sequence: top,
                filtered: vec![(1, 1, 0)],
                full: Some(vec![(1, 1, 0)]),
            },
            Expected::KSeqTrivialUpTo { component: n, max_len: n as usize - 2 },
            Expected::SigmaZero { component: n },
        ],
    })
}

fn stirling_conjugator(n: u8, reversed: Option<u8>) -> WordExpr {
    let parts: Vec<WordExpr> = (2..n)
        .map(|k| {
            if Some(k) == reversed {
                WordExpr::Inverse(Box::new(WordExpr::Gen(k)))
            } else {
                WordExpr::Gen(k)
            }
        })
        .collect();
    WordExpr::nested_commutator(&parts)
}

/// The family whose component `n` carries a positive meridian singularity
/// and a negative conjugated copy of it.
pub fn stirling(n: u8) -> Result<CatalogEntry> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("stirling requires n >= 3, got {n}")));
    }
    let c = stirling_conjugator(n, None);
    let sings = vec![
        (1, WordExpr::Gen(1)),
        (-1, WordExpr::conjugate(WordExpr::Gen(1), c)),
    ];
    let top: Vec<u8> = (1..n).collect();
    Ok(CatalogEntry {
        name: format!("s[{n}]"),
        summary: format!("{n}-component link map with two aggregated classes"),
        presentation: presentation(n, n, sings),
        expected: vec![
            Expected::KappaTilde {
                component: n,
                sequence: top,
                value: -1,
                modulus: 0,
            },
            Expected::KappaVanishesUpTo { component: n, max_len: n as usize - 2 },
            Expected::KSeq {
                component: n,
                sequence: vec![1],
                filtered: vec![(-1, 1, 0), (1, 1, 0)],
                full: None,
            },
            Expected::KPairs { component: n, pairs: vec![(-1, "X1"), (1, "X1")] },
            Expected::SigmaZero { component: n },
        ],
    })
}

/// The same family with the orientation of component `i` reversed, which
/// inverts the meridian `x_i` inside the conjugating commutator.
pub fn stirling_reversed(n: u8, i: u8) -> Result<CatalogEntry> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "stirling-reversed requires n >= 4, got {n}"
        )));
    }
    if i <= 1 || i >= n {
        return Err(Error::InvalidParameter(format!(
            "reversed component must satisfy 1 < i < n, got {i}"
        )));
    }
    let c = stirling_conjugator(n, Some(i));
    let sings = vec![
        (1, WordExpr::Gen(1)),
        (-1, WordExpr::conjugate(WordExpr::Gen(1), c)),
    ];
    let top: Vec<u8> = (1..n).collect();
    Ok(CatalogEntry {
        name: format!("s^{i}[{n}]"),
        summary: format!("s[{n}] with component {i} reversed"),
        presentation: presentation(n, n, sings),
        expected: vec![
            Expected::KappaTilde {
                component: n,
                sequence: top,
                value: 1,
                modulus: 0,
            },
            Expected::KPairs { component: n, pairs: vec![(-1, "X1"), (1, "X1")] },
            Expected::SigmaZero { component: n },
        ],
    })
}

/// The 3-component link map with four singularities on its third
/// component: every residue of the aggregate sum vanishes, yet the
/// multiset invariants do not.
pub fn y3_variant() -> CatalogEntry {
    use WordExpr::{Gen, Inverse, Product};
    let x1 = || Gen(1);
    let x2 = || Gen(2);
    let x2inv = || Inverse(Box::new(Gen(2)));
    let sings = vec![
        (1, Product(vec![x1(), x2inv()])),
        (-1, x1()),
        (1, Product(vec![x2(), x1()])),
        (-1, Product(vec![x2(), x1(), x2inv()])),
    ];
    CatalogEntry {
        name: "y3".into(),
        summary: "3-component link map invisible to the aggregate residues".into(),
        presentation: presentation(3, 3, sings),
        expected: vec![
            Expected::EZero { component: 3 },
            Expected::KappaTilde { component: 3, sequence: vec![1, 2], value: 0, modulus: 0 },
            Expected::KSeq {
                component: 3,
                sequence: vec![1],
                filtered: vec![(-1, 1, 0), (-1, 1, 0), (1, 1, 0), (1, 1, 0)],
                full: Some(vec![(-1, 1, 0), (-1, 1, 0), (1, 1, 0), (1, 1, 0)]),
            },
            Expected::KSeq {
                component: 3,
                sequence: vec![2],
                filtered: vec![(1, -1, 0), (1, 1, 0)],
                full: Some(vec![(-1, 0, 0), (-1, 0, 0), (1, -1, 0), (1, 1, 0)]),
            },
            Expected::KPairs {
                component: 3,
                pairs: vec![(-1, "X1"), (-1, "X1"), (1, "X1 - X2"), (1, "X1 + X2")],
            },
        ],
    }
}

/// Builder names accepted by `build`, with a short description.
pub fn names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("fr", "2-component example; no parameters"),
        ("y", "top-degree family; --n K with K >= 3 (default 3)"),
        ("stirling", "two-class family; --n K with K >= 3 (default 3)"),
        (
            "stirling-reversed",
            "stirling with one component reversed; --n K >= 4 and --reversed i with 1 < i < K (defaults 4, 2)",
        ),
        ("y3", "3-component four-singularity example; no parameters"),
    ]
}

/// Builds a catalog entry by name.
pub fn build(name: &str, n: Option<u8>, reversed: Option<u8>) -> Result<CatalogEntry> {
    match name {
        "fr" => Ok(fenn_rolfsen()),
        "y" => y_family(n.unwrap_or(3)),
        "stirling" => stirling(n.unwrap_or(3)),
        "stirling-reversed" => stirling_reversed(n.unwrap_or(4), reversed.unwrap_or(2)),
        "y3" => Ok(y3_variant()),
        _ => Err(Error::InvalidParameter(format!("unknown catalog entry `{name}`"))),
    }
}

fn arc(id: &str, component: u8) -> DiagramArc {
    DiagramArc { id: id.into(), component }
}

fn crossing(over: &str, under_in: &str, under_out: &str, sign: i8) -> Crossing {
    Crossing {
        over: over.into(),
        under_in: under_in.into(),
        under_out: under_out.into(),
        sign,
    }
}

/// Cross-section fixture for the 2-component example: a symmetric clasp
/// whose two lobes each link the other component once.
pub fn fenn_rolfsen_cross_section() -> CrossSection {
    let diagram = DiagramSpec {
        n: 2,
        arcs: vec![arc("a1", 1), arc("a2", 1), arc("b1", 2), arc("b2", 2)],
        base_arcs: [(1, "a1"), (2, "b1")]
            .into_iter()
            .map(|(c, id)| (c, id.to_string()))
            .collect(),
        crossings: vec![
            crossing("b1", "a1", "a2", 1),
            crossing("b2", "a2", "a1", -1),
            crossing("a1", "b1", "b2", 1),
            crossing("a2", "b2", "b1", -1),
        ],
    };
    let mut singularities = BTreeMap::new();
    singularities.insert(
        1,
        vec![LoopSingularity { sign: -1, loop_spec: LoopSpec(vec![("b1".into(), 1)]) }],
    );
    singularities.insert(
        2,
        vec![LoopSingularity { sign: 1, loop_spec: LoopSpec(vec![("a2".into(), 1)]) }],
    );
    CrossSection { diagram, singularities }
}

/// Cross-section fixture whose singular loop reads the commutator of the
/// two retained meridians through a clasp.
pub fn y3_cross_section() -> CrossSection {
    let diagram = DiagramSpec {
        n: 3,
        arcs: vec![arc("a1", 1), arc("a2", 1), arc("b1", 2), arc("c1", 3)],
        base_arcs: [(1, "a1"), (2, "b1"), (3, "c1")]
            .into_iter()
            .map(|(c, id)| (c, id.to_string()))
            .collect(),
        crossings: vec![
            crossing("b1", "a1", "a2", 1),
            crossing("b1", "a2", "a1", -1),
        ],
    };
    let mut singularities = BTreeMap::new();
    singularities.insert(
        3,
        vec![LoopSingularity {
            sign: 1,
            loop_spec: LoopSpec(vec![("a1".into(), -1), ("a2".into(), 1)]),
        }],
    );
    CrossSection { diagram, singularities }
}
