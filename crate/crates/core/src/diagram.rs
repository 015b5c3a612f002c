//! Cross-section front-end: Wirtinger-level diagrams of self-singular
//! links, and Milnor's iterative algorithm expressing each arc meridian as
//! a conjugate of its component's base meridian in the reduced free group.
//!
//! Deleting component `i` discards its arcs; an overpass of the deleted
//! component joins its two under arcs into one. On the reduced diagram the
//! sweep initializes every conjugator word to 1 and iterates the Wirtinger
//! update `w_out = w_in * w_over^-1 x_{c(over)}^eps w_over`, reading the
//! over words from the previous sweep, until all Magnus expansions are
//! stable. Nilpotency bounds the number of useful sweeps by the arity;
//! inputs whose reduced group is not free on the meridians are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{Presentation, Singularity};
use crate::ring::{Ctx, Polynomial};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramArc {
    pub id: String,
    pub component: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub over: String,
    pub under_in: String,
    pub under_out: String,
    pub sign: i8,
}

/// Wirtinger data for a diagram: arcs assigned to components, one base arc
/// per component, and the crossing list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub n: u8,
    pub arcs: Vec<DiagramArc>,
    pub base_arcs: BTreeMap<u8, String>,
    pub crossings: Vec<Crossing>,
}

/// The signed intersections of a based loop with the diagram, in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LoopSpec(pub Vec<(String, i8)>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSingularity {
    pub sign: i8,
    #[serde(rename = "loop")]
    pub loop_spec: LoopSpec,
}

/// A diagram together with the based loops through the singular points of
/// each component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossSection {
    #[serde(flatten)]
    pub diagram: DiagramSpec,
    pub singularities: BTreeMap<u8, Vec<LoopSingularity>>,
}

impl DiagramSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::ArityTooSmall(self.n));
        }
        let mut components: BTreeMap<&str, u8> = BTreeMap::new();
        for arc in &self.arcs {
            if arc.id.is_empty() {
                return Err(Error::MalformedDiagram("empty arc id".into()));
            }
            if arc.component == 0 || arc.component > self.n {
                return Err(Error::MalformedDiagram(format!(
                    "arc `{}` assigned to component {} of {}",
                    arc.id, arc.component, self.n
                )));
            }
            if components.insert(&arc.id, arc.component).is_some() {
                return Err(Error::MalformedDiagram(format!("duplicate arc id `{}`", arc.id)));
            }
        }
        for c in 1..=self.n {
            match self.base_arcs.get(&c) {
                None => {
                    return Err(Error::MalformedDiagram(format!(
                        "component {c} has no base arc"
                    )))
                }
                Some(id) => match components.get(id.as_str()) {
                    None => return Err(Error::UnknownArc(id.clone())),
                    Some(&cc) if cc != c => {
                        return Err(Error::MalformedDiagram(format!(
                            "base arc `{id}` of component {c} lies on component {cc}"
                        )))
                    }
                    _ => {}
                },
            }
        }
        let mut under_out_seen: BTreeMap<&str, ()> = BTreeMap::new();
        for x in &self.crossings {
            if x.sign != 1 && x.sign != -1 {
                return Err(Error::InvalidSign(x.sign));
            }
            for id in [&x.over, &x.under_in, &x.under_out] {
                if !components.contains_key(id.as_str()) {
                    return Err(Error::UnknownArc(id.clone()));
                }
            }
            if components[x.under_in.as_str()] != components[x.under_out.as_str()] {
                return Err(Error::MalformedDiagram(format!(
                    "crossing joins arcs `{}` and `{}` of different components",
                    x.under_in, x.under_out
                )));
            }
            if under_out_seen.insert(&x.under_out, ()).is_some() {
                return Err(Error::MalformedDiagram(format!(
                    "arc `{}` is the under-out of more than one crossing",
                    x.under_out
                )));
            }
        }
        Ok(())
    }

    pub fn component_of(&self, arc: &str) -> Result<u8> {
        self.arcs
            .iter()
            .find(|a| a.id == arc)
            .map(|a| a.component)
            .ok_or_else(|| Error::UnknownArc(arc.to_string()))
    }
}

/// The diagram of the sub-link obtained by deleting one component. Arc ids
/// are mapped to class representatives: an overpass of the deleted
/// component identifies its two under arcs.
#[derive(Debug, Clone)]
pub struct ReducedDiagram {
    ctx: Ctx,
    rep_of: BTreeMap<String, String>,
    component_of_rep: BTreeMap<String, u8>,
    all_components: BTreeMap<String, u8>,
    base: BTreeMap<u8, String>,
    crossings: Vec<Crossing>,
}

impl ReducedDiagram {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    /// The representative of a retained arc.
    pub fn rep(&self, arc: &str) -> Result<&str> {
        match self.rep_of.get(arc) {
            Some(r) => Ok(r),
            None => match self.all_components.get(arc) {
                Some(&c) => Err(Error::LoopTouchesDeleted {
                    arc: arc.to_string(),
                    component: c,
                }),
                None => Err(Error::UnknownArc(arc.to_string())),
            },
        }
    }

    pub fn component_of_rep(&self, rep: &str) -> u8 {
        self.all_components[rep]
    }

    pub fn representatives(&self) -> impl Iterator<Item = (&str, u8)> + '_ {
        self.component_of_rep.iter().map(|(r, &c)| (r.as_str(), c))
    }

    pub fn base(&self) -> &BTreeMap<u8, String> {
        &self.base
    }

    /// Retained crossings, with arcs renamed to representatives.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }
}

/// Deletes component `i` from a diagram.
pub fn delete_component(d: &DiagramSpec, i: u8) -> Result<ReducedDiagram> {
    d.validate()?;
    let ctx = Ctx::new(d.n, i)?;

    let retained: Vec<&DiagramArc> = d.arcs.iter().filter(|a| a.component != i).collect();
    let index: BTreeMap<&str, usize> = retained
        .iter()
        .enumerate()
        .map(|(k, a)| (a.id.as_str(), k))
        .collect();
    let all_components: BTreeMap<String, u8> =
        d.arcs.iter().map(|a| (a.id.clone(), a.component)).collect();

    // Union-find over retained arcs.
    let mut parent: Vec<usize> = (0..retained.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut kept = Vec::new();
    for x in &d.crossings {
        let under_component = all_components[&x.under_in];
        if under_component == i {
            continue;
        }
        if all_components[&x.over] == i {
            let a = find(&mut parent, index[x.under_in.as_str()]);
            let b = find(&mut parent, index[x.under_out.as_str()]);
            parent[a.max(b)] = a.min(b);
        } else {
            kept.push(x);
        }
    }

    // Deterministic class labels: the smallest arc id in each class.
    let mut label: BTreeMap<usize, String> = BTreeMap::new();
    for (k, arc) in retained.iter().enumerate() {
        let root = find(&mut parent, k);
        match label.get_mut(&root) {
            Some(l) if *l <= arc.id => {}
            _ => {
                label.insert(root, arc.id.clone());
            }
        }
    }
    let mut rep_of = BTreeMap::new();
    let mut component_of_rep = BTreeMap::new();
    for (k, arc) in retained.iter().enumerate() {
        let rep = label[&find(&mut parent, k)].clone();
        component_of_rep.insert(rep.clone(), arc.component);
        rep_of.insert(arc.id.clone(), rep);
    }

    let crossings = kept
        .into_iter()
        .map(|x| Crossing {
            over: rep_of[&x.over].clone(),
            under_in: rep_of[&x.under_in].clone(),
            under_out: rep_of[&x.under_out].clone(),
            sign: x.sign,
        })
        .collect();

    let base = d
        .base_arcs
        .iter()
        .filter(|(&c, _)| c != i)
        .map(|(&c, id)| (c, rep_of[id].clone()))
        .collect();

    Ok(ReducedDiagram { ctx, rep_of, component_of_rep, all_components, base, crossings })
}

/// The conjugator words of a stabilized Milnor run: each retained arc `a`
/// has meridian `w_a^-1 x_{c(a)} w_a`.
#[derive(Debug, Clone)]
pub struct Conjugators {
    reduced: ReducedDiagram,
    words: BTreeMap<String, Word>,
    settled_after: usize,
}

fn conjugated_meridian(w: &Word, gen: u8, inverse: bool) -> Word {
    let ctx = *w.ctx();
    let letter = Word::new(ctx, vec![Letter::new(gen, inverse)]).expect("validated arc meridian");
    w.inverse().concat(&letter).concat(w)
}

impl Conjugators {
    pub fn ctx(&self) -> &Ctx {
        self.reduced.ctx()
    }

    pub fn reduced(&self) -> &ReducedDiagram {
        &self.reduced
    }

    /// The conjugator word of a retained arc.
    pub fn word(&self, arc: &str) -> Result<&Word> {
        let rep = self.reduced.rep(arc)?;
        Ok(&self.words[rep])
    }

    /// The meridian word `w_a^-1 x_{c(a)}^eps w_a` of a retained arc.
    pub fn meridian(&self, arc: &str, inverse: bool) -> Result<Word> {
        let rep = self.reduced.rep(arc)?;
        let gen = self.reduced.component_of_rep(rep);
        Ok(conjugated_meridian(&self.words[rep], gen, inverse))
    }

    /// The number of sweeps after which the expansions were already stable.
    pub fn settled_after(&self) -> usize {
        self.settled_after
    }
}

fn sweep_expansions(words: &BTreeMap<String, Word>) -> BTreeMap<String, Polynomial> {
    words
        .iter()
        .map(|(rep, w)| (rep.clone(), w.magnus_expand()))
        .collect()
}

/// Runs Milnor's algorithm on the diagram with component `i` deleted.
pub fn conjugator_words(d: &DiagramSpec, i: u8) -> Result<Conjugators> {
    let reduced = delete_component(d, i)?;
    let ctx = *reduced.ctx();

    // successor crossing of each under-in representative
    let mut succ: BTreeMap<&str, &Crossing> = BTreeMap::new();
    for x in reduced.crossings() {
        if succ.insert(x.under_in.as_str(), x).is_some() {
            return Err(Error::MalformedDiagram(format!(
                "arc `{}` is the under-in of more than one retained crossing",
                x.under_in
            )));
        }
    }

    let mut words: BTreeMap<String, Word> = reduced
        .representatives()
        .map(|(rep, _)| (rep.to_string(), Word::empty(ctx)))
        .collect();
    let arc_count = words.len();
    let mut prev = sweep_expansions(&words);

    let cap = d.n as usize;
    let mut settled_after = None;
    for sweep in 1..=cap {
        let snapshot = words.clone();
        for base in reduced.base().values() {
            let mut cur = base.as_str();
            let mut steps = 0usize;
            while let Some(&x) = succ.get(cur) {
                if x.under_out == *base {
                    break;
                }
                let over_gen = reduced.component_of_rep(&x.over);
                let m_over = conjugated_meridian(&snapshot[&x.over], over_gen, x.sign < 0);
                let w_out = words[cur].concat(&m_over).freely_reduced();
                words.insert(x.under_out.clone(), w_out);
                cur = x.under_out.as_str();
                steps += 1;
                if steps > arc_count {
                    return Err(Error::MalformedDiagram(
                        "arc chain does not return to its base arc".into(),
                    ));
                }
            }
        }
        let exps = sweep_expansions(&words);
        if exps == prev {
            settled_after = Some(sweep - 1);
            break;
        }
        prev = exps;
    }

    let Some(settled_after) = settled_after else {
        return Err(Error::NonStabilizing { sweeps: cap });
    };

    let conj = Conjugators { reduced, words, settled_after };
    if !check_relations(&conj) {
        return Err(Error::InconsistentDiagram);
    }
    Ok(conj)
}

fn check_relations(conj: &Conjugators) -> bool {
    conj.reduced.crossings().iter().all(|x| {
        let under_gen = conj.reduced.component_of_rep(&x.under_in);
        let over_gen = conj.reduced.component_of_rep(&x.over);
        let lhs = conjugated_meridian(&conj.words[&x.under_out], under_gen, false);
        let rhs_conj = conj.words[&x.under_in]
            .concat(&conjugated_meridian(&conj.words[&x.over], over_gen, x.sign < 0));
        let rhs = conjugated_meridian(&rhs_conj, under_gen, false);
        lhs.magnus_expand() == rhs.magnus_expand()
    })
}

/// True iff every retained crossing relation holds as an equality of
/// Magnus expansions of the assigned meridian words.
pub fn check_wirtinger_consistency(conj: &Conjugators) -> bool {
    check_relations(conj)
}

/// The word of a based loop: the product of the signed meridians of the
/// arcs it crosses, in order.
pub fn loop_word(conj: &Conjugators, spec: &LoopSpec) -> Result<Word> {
    let mut w = Word::empty(*conj.ctx());
    for (arc, sign) in &spec.0 {
        if *sign != 1 && *sign != -1 {
            return Err(Error::InvalidSign(*sign));
        }
        w = w.concat(&conj.meridian(arc, *sign < 0)?);
    }
    Ok(w.freely_reduced())
}

/// Computes the link map presentation of a cross-section: for each
/// component, every singular loop is converted to its positive word.
pub fn presentation_from_cross_section(cs: &CrossSection) -> Result<Presentation> {
    cs.diagram.validate()?;
    let n = cs.diagram.n;
    let mut lists: Vec<Vec<Singularity>> = vec![Vec::new(); n as usize];
    for (&i, sings) in &cs.singularities {
        if i == 0 || i > n {
            return Err(Error::ComponentOutOfRange { component: i, arity: n });
        }
        if sings.is_empty() {
            continue;
        }
        let conj = conjugator_words(&cs.diagram, i)?;
        for s in sings {
            let w = loop_word(&conj, &s.loop_spec)?;
            let (g, _) = w.positive_normalize();
            lists[i as usize - 1].push(Singularity::new(s.sign, g.to_expr())?);
        }
    }
    Presentation::new(n, lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, rf_equal};

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

    fn unlink(n: u8) -> DiagramSpec {
        DiagramSpec {
            n,
            arcs: (1..=n).map(|c| arc(&format!("u{c}"), c)).collect(),
            base_arcs: (1..=n).map(|c| (c, format!("u{c}"))).collect(),
            crossings: vec![],
        }
    }

    /// Two-crossing clasp: component 2 passes over component 1 twice with
    /// opposite signs.
    fn clasp3() -> DiagramSpec {
        DiagramSpec {
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
        }
    }

    #[test]
    fn crossingless_unlink_has_trivial_conjugators() {
        let d = unlink(3);
        let conj = conjugator_words(&d, 3).unwrap();
        assert_eq!(conj.settled_after(), 0);
        for id in ["u1", "u2"] {
            assert!(conj.word(id).unwrap().is_empty());
        }
        assert!(check_wirtinger_consistency(&conj));
    }

    #[test]
    fn single_undercrossing_gives_one_meridian() {
        // arc b2 of component 2 sits past one undercrossing beneath the
        // base arc of component 3, with sign +1
        let d = DiagramSpec {
            n: 3,
            arcs: vec![arc("u1", 1), arc("b1", 2), arc("b2", 2), arc("c1", 3)],
            base_arcs: [(1, "u1"), (2, "b1"), (3, "c1")]
                .into_iter()
                .map(|(c, id)| (c, id.to_string()))
                .collect(),
            crossings: vec![crossing("c1", "b1", "b2", 1)],
        };
        let conj = conjugator_words(&d, 1).unwrap();
        let ctx = *conj.ctx();
        let expected = parse_word("x3", ctx).unwrap().flatten(ctx).unwrap();
        assert!(rf_equal(conj.word("b2").unwrap(), &expected));
        assert!(conj.word("b1").unwrap().is_empty());
    }

    #[test]
    fn clasp_stabilizes_and_is_consistent() {
        let conj = conjugator_words(&clasp3(), 3).unwrap();
        assert!(conj.settled_after() <= 2);
        let ctx = *conj.ctx();
        let expected = parse_word("x2", ctx).unwrap().flatten(ctx).unwrap();
        assert!(rf_equal(conj.word("a2").unwrap(), &expected));
        assert!(check_wirtinger_consistency(&conj));
    }

    #[test]
    fn corrupted_word_fails_consistency() {
        let mut conj = conjugator_words(&clasp3(), 3).unwrap();
        assert!(check_wirtinger_consistency(&conj));
        let ctx = *conj.ctx();
        let bogus = parse_word("x1 x2", ctx).unwrap().flatten(ctx).unwrap();
        conj.words.insert("a2".into(), bogus);
        assert!(!check_wirtinger_consistency(&conj));
    }

    #[test]
    fn deleted_overpass_merges_under_arcs() {
        // component 2 goes under component 3, then under component 1;
        // deleting component 1 must identify the two sides of its overpass
        let d = DiagramSpec {
            n: 3,
            arcs: vec![
                arc("a1", 1),
                arc("b1", 2),
                arc("b2", 2),
                arc("b3", 2),
                arc("c1", 3),
            ],
            base_arcs: [(1, "a1"), (2, "b1"), (3, "c1")]
                .into_iter()
                .map(|(c, id)| (c, id.to_string()))
                .collect(),
            crossings: vec![
                crossing("c1", "b1", "b2", 1),
                crossing("a1", "b2", "b3", 1),
            ],
        };
        let conj = conjugator_words(&d, 1).unwrap();
        // b3 is the same arc as b2 after deletion
        assert_eq!(
            conj.word("b3").unwrap().letters(),
            conj.word("b2").unwrap().letters()
        );
        let ctx = *conj.ctx();
        let x3 = parse_word("x3", ctx).unwrap().flatten(ctx).unwrap();
        assert!(rf_equal(conj.word("b3").unwrap(), &x3));
    }

    #[test]
    fn hopf_pair_inside_retained_diagram_is_rejected() {
        // two components clasped with equal signs: the reduced group of
        // the retained sub-link is not free on its meridians
        let d = DiagramSpec {
            n: 3,
            arcs: vec![arc("a1", 1), arc("a2", 1), arc("b1", 2), arc("c1", 3)],
            base_arcs: [(1, "a1"), (2, "b1"), (3, "c1")]
                .into_iter()
                .map(|(c, id)| (c, id.to_string()))
                .collect(),
            crossings: vec![
                crossing("b1", "a1", "a2", 1),
                crossing("b1", "a2", "a1", 1),
            ],
        };
        let err = conjugator_words(&d, 3).unwrap_err();
        assert!(matches!(
            err,
            Error::InconsistentDiagram | Error::NonStabilizing { .. }
        ));
    }

    #[test]
    fn loop_word_products_and_errors() {
        let conj = conjugator_words(&clasp3(), 3).unwrap();
        let ctx = *conj.ctx();

        let w = loop_word(&conj, &LoopSpec(vec![("b1".into(), 1)])).unwrap();
        assert!(rf_equal(&w, &parse_word("x2", ctx).unwrap().flatten(ctx).unwrap()));

        // commutator loop through the two sides of the clasp
        let w = loop_word(
            &conj,
            &LoopSpec(vec![("a1".into(), -1), ("a2".into(), 1)]),
        )
        .unwrap();
        let comm = parse_word("[x1,x2]", ctx).unwrap().flatten(ctx).unwrap();
        assert!(rf_equal(&w, &comm));

        // a cancelling revisit changes nothing
        let w2 = loop_word(
            &conj,
            &LoopSpec(vec![
                ("a1".into(), -1),
                ("b1".into(), 1),
                ("b1".into(), -1),
                ("a2".into(), 1),
            ]),
        )
        .unwrap();
        assert!(rf_equal(&w, &w2));

        // loops may not touch the deleted component
        let err = loop_word(&conj, &LoopSpec(vec![("c1".into(), 1)])).unwrap_err();
        assert!(matches!(err, Error::LoopTouchesDeleted { component: 3, .. }));
        let err = loop_word(&conj, &LoopSpec(vec![("zz".into(), 1)])).unwrap_err();
        assert!(matches!(err, Error::UnknownArc(_)));
    }

    #[test]
    fn reversed_loop_normalizes_to_the_same_entry() {
        let conj = conjugator_words(&clasp3(), 3).unwrap();
        let fwd = loop_word(
            &conj,
            &LoopSpec(vec![("a1".into(), -1), ("a2".into(), 1)]),
        )
        .unwrap();
        let bwd = loop_word(
            &conj,
            &LoopSpec(vec![("a2".into(), -1), ("a1".into(), 1)]),
        )
        .unwrap();
        assert!(rf_equal(&fwd.inverse(), &bwd));
        let (nf, fi) = fwd.positive_normalize();
        let (nb, bi) = bwd.positive_normalize();
        assert!(rf_equal(&nf, &nb));
        assert_ne!(fi, bi);
    }

    #[test]
    fn empty_cross_section_gives_empty_presentation() {
        let cs = CrossSection {
            diagram: unlink(3),
            singularities: BTreeMap::new(),
        };
        let p = presentation_from_cross_section(&cs).unwrap();
        for i in 1..=3 {
            assert!(p.component(i).unwrap().is_empty());
        }
    }

    #[test]
    fn malformed_diagrams_are_rejected() {
        let mut d = unlink(2);
        d.base_arcs.remove(&2);
        assert!(matches!(
            delete_component(&d, 1),
            Err(Error::MalformedDiagram(_))
        ));

        let mut d = unlink(2);
        d.crossings.push(crossing("u1", "u1", "u2", 1));
        assert!(matches!(
            delete_component(&d, 1),
            Err(Error::MalformedDiagram(_))
        ));

        let mut d = unlink(2);
        d.crossings.push(crossing("nope", "u1", "u1", 1));
        assert!(matches!(delete_component(&d, 1), Err(Error::UnknownArc(_))));
    }
}
