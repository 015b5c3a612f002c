//! Words and structured expressions in the reduced free group on the
//! generators `x_1..x_n` minus `x_i`, together with their Magnus expansion.
//!
//! Conventions: `[x,y] = x^-1 y^-1 x y` and `x^y = y^-1 x y`. The expansion
//! sends `x_j^±1` to `1 ± X_j`; it is an injective homomorphism into the
//! truncated ring, so expansion equality decides equality in the group.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ctx, Polynomial};

/// A single signed generator `x_j` or `x_j^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u8, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A word: a letter sequence with its variable context. Words are not kept
/// freely reduced; equality of group elements is semantic, via `rf_equal`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    ctx: Ctx,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty(ctx: Ctx) -> Self {
        Word { ctx, letters: Vec::new() }
    }

    pub fn new(ctx: Ctx, letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            ctx.check_index(l.gen)?;
        }
        Ok(Word { ctx, letters })
    }

    pub fn generator(ctx: Ctx, gen: u8) -> Result<Self> {
        ctx.check_index(gen)?;
        Ok(Word { ctx, letters: vec![Letter::new(gen, false)] })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            ctx: self.ctx,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        self.ctx.check_same(&other.ctx).expect("word context mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { ctx: self.ctx, letters }
    }

    pub fn mentions(&self, gen: u8) -> bool {
        self.letters.iter().any(|l| l.gen == gen)
    }

    /// Cancels adjacent `x x^-1` pairs. Changes the spelling, not the element.
    pub fn freely_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&last) if last.gen == l.gen && last.inverse != l.inverse => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { ctx: self.ctx, letters: out }
    }

    /// The reduced Magnus expansion: the product of `1 ± X_j` over letters.
    pub fn magnus_expand(&self) -> Polynomial {
        let mut acc = Polynomial::one(self.ctx);
        for l in &self.letters {
            let x = Polynomial::variable(self.ctx, l.gen).expect("validated letter");
            let factor = if l.inverse {
                Polynomial::one(self.ctx).sub(&x)
            } else {
                Polynomial::one(self.ctx).add(&x)
            };
            acc = acc.mul(&factor);
        }
        acc
    }

    /// True when the expansion is 1, or its first non-vanishing term has a
    /// positive coefficient.
    pub fn is_positive(&self) -> bool {
        match self.magnus_expand().leading_term() {
            None => true,
            Some((_, c)) => c > 0,
        }
    }

    /// Returns the word itself when positive, otherwise its inverse; the
    /// flag records whether an inversion happened.
    pub fn positive_normalize(&self) -> (Word, bool) {
        if self.is_positive() {
            (self.clone(), false)
        } else {
            (self.inverse(), true)
        }
    }

    pub fn to_expr(&self) -> WordExpr {
        WordExpr::Product(
            self.letters
                .iter()
                .map(|l| {
                    let g = WordExpr::Gen(l.gen);
                    if l.inverse {
                        WordExpr::Inverse(Box::new(g))
                    } else {
                        g
                    }
                })
                .collect(),
        )
    }
}

/// Equality in the reduced free group, decided through the injective
/// Magnus expansion.
pub fn rf_equal(u: &Word, v: &Word) -> bool {
    u.ctx().check_same(v.ctx()).expect("word context mismatch");
    u.magnus_expand() == v.magnus_expand()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}", l.gen)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// A structured group expression over the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WordExpr {
    Gen(u8),
    Product(Vec<WordExpr>),
    Inverse(Box<WordExpr>),
    Power(Box<WordExpr>, i32),
    /// `Conjugate(a, b)` is `a^b = b^-1 a b`.
    Conjugate(Box<WordExpr>, Box<WordExpr>),
    /// `Commutator(a, b)` is `[a, b] = a^-1 b^-1 a b`.
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

impl WordExpr {
    pub fn empty() -> Self {
        WordExpr::Product(Vec::new())
    }

    /// The iterated commutator `[v_0, [v_1, [.., v_k]..]]`; a single index
    /// degenerates to the plain generator.
    pub fn nested_commutator(gens: &[WordExpr]) -> WordExpr {
        match gens {
            [] => WordExpr::empty(),
            [single] => single.clone(),
            [head, rest @ ..] => WordExpr::Commutator(
                Box::new(head.clone()),
                Box::new(WordExpr::nested_commutator(rest)),
            ),
        }
    }

    pub fn conjugate(base: WordExpr, by: WordExpr) -> WordExpr {
        WordExpr::Conjugate(Box::new(base), Box::new(by))
    }

    pub fn mentions(&self, gen: u8) -> bool {
        match self {
            WordExpr::Gen(g) => *g == gen,
            WordExpr::Product(items) => items.iter().any(|e| e.mentions(gen)),
            WordExpr::Inverse(e) | WordExpr::Power(e, _) => e.mentions(gen),
            WordExpr::Conjugate(a, b) | WordExpr::Commutator(a, b) => {
                a.mentions(gen) || b.mentions(gen)
            }
        }
    }

    /// Replaces every occurrence of the generator `j` by `rep`.
    pub fn substitute_gen(&self, j: u8, rep: &WordExpr) -> WordExpr {
        match self {
            WordExpr::Gen(g) if *g == j => rep.clone(),
            WordExpr::Gen(g) => WordExpr::Gen(*g),
            WordExpr::Product(items) => {
                WordExpr::Product(items.iter().map(|e| e.substitute_gen(j, rep)).collect())
            }
            WordExpr::Inverse(e) => WordExpr::Inverse(Box::new(e.substitute_gen(j, rep))),
            WordExpr::Power(e, k) => WordExpr::Power(Box::new(e.substitute_gen(j, rep)), *k),
            WordExpr::Conjugate(a, b) => WordExpr::Conjugate(
                Box::new(a.substitute_gen(j, rep)),
                Box::new(b.substitute_gen(j, rep)),
            ),
            WordExpr::Commutator(a, b) => WordExpr::Commutator(
                Box::new(a.substitute_gen(j, rep)),
                Box::new(b.substitute_gen(j, rep)),
            ),
        }
    }

    /// Flattens to a plain letter sequence, validating generators.
    pub fn flatten(&self, ctx: Ctx) -> Result<Word> {
        let mut letters = Vec::new();
        self.flatten_into(ctx, false, &mut letters)?;
        Ok(Word { ctx, letters })
    }

    fn flatten_into(&self, ctx: Ctx, inverted: bool, out: &mut Vec<Letter>) -> Result<()> {
        match self {
            WordExpr::Gen(g) => {
                ctx.check_index(*g)?;
                out.push(Letter::new(*g, inverted));
            }
            WordExpr::Product(items) => {
                if inverted {
                    for e in items.iter().rev() {
                        e.flatten_into(ctx, true, out)?;
                    }
                } else {
                    for e in items {
                        e.flatten_into(ctx, false, out)?;
                    }
                }
            }
            WordExpr::Inverse(e) => e.flatten_into(ctx, !inverted, out)?,
            WordExpr::Power(e, k) => {
                let flip = *k < 0;
                for _ in 0..k.unsigned_abs() {
                    e.flatten_into(ctx, inverted ^ flip, out)?;
                }
            }
            WordExpr::Conjugate(a, b) => {
                // b^-1 a b, reversed as a whole when inverted
                if inverted {
                    b.flatten_into(ctx, true, out)?;
                    a.flatten_into(ctx, true, out)?;
                    b.flatten_into(ctx, false, out)?;
                } else {
                    b.flatten_into(ctx, true, out)?;
                    a.flatten_into(ctx, false, out)?;
                    b.flatten_into(ctx, false, out)?;
                }
            }
            WordExpr::Commutator(a, b) => {
                // a^-1 b^-1 a b; the inverse is [b, a]
                let (a, b) = if inverted { (b, a) } else { (a, b) };
                a.flatten_into(ctx, true, out)?;
                b.flatten_into(ctx, true, out)?;
                a.flatten_into(ctx, false, out)?;
                b.flatten_into(ctx, false, out)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn is_atom(e: &WordExpr) -> bool {
            matches!(e, WordExpr::Gen(_) | WordExpr::Commutator(_, _))
        }
        fn atom(e: &WordExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if is_atom(e) {
                write!(f, "{e}")
            } else {
                write!(f, "({e})")
            }
        }
        match self {
            WordExpr::Gen(g) => write!(f, "x{g}"),
            WordExpr::Product(items) => {
                for (k, e) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    if matches!(e, WordExpr::Product(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            WordExpr::Inverse(e) => {
                atom(e, f)?;
                write!(f, "^-1")
            }
            WordExpr::Power(e, k) => {
                atom(e, f)?;
                write!(f, "^{k}")
            }
            WordExpr::Conjugate(a, b) => {
                atom(a, f)?;
                write!(f, "^")?;
                atom(b, f)
            }
            WordExpr::Commutator(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Parses the word grammar:
///
/// ```text
/// word     := factor { factor }
/// factor   := atom [ '^' exponent ]
/// atom     := 'x' INT | '(' word ')' | '[' word ',' word ']'
/// exponent := SIGNED_INT | atom
/// ```
///
/// Whitespace is insignificant; an empty input is the trivial word.
pub fn parse_word(text: &str, ctx: Ctx) -> Result<WordExpr> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, ctx };
    p.skip_ws();
    if p.at_end() {
        return Ok(WordExpr::empty());
    }
    let w = p.word()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ctx: Ctx,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn word(&mut self) -> Result<WordExpr> {
        let mut factors = vec![self.factor()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'x') | Some(b'(') | Some(b'[') => factors.push(self.factor()?),
                _ => break,
            }
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(WordExpr::Product(factors))
        }
    }

    fn factor(&mut self) -> Result<WordExpr> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            match self.peek() {
                Some(b) if b == b'-' || b == b'+' || b.is_ascii_digit() => {
                    let k = self.signed_int()?;
                    Ok(WordExpr::Power(Box::new(base), k))
                }
                Some(b'x') | Some(b'(') | Some(b'[') => {
                    let exp = self.atom()?;
                    Ok(WordExpr::Conjugate(Box::new(base), Box::new(exp)))
                }
                _ => Err(self.err("expected an integer or an atom after `^`")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<WordExpr> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let g = self.unsigned_int()?;
                if g == 0 || g > u8::MAX as u32 {
                    return Err(self.err("generator index out of range"));
                }
                let g = g as u8;
                match self.ctx.check_index(g) {
                    Ok(()) => Ok(WordExpr::Gen(g)),
                    Err(Error::ExcludedIndex { .. }) => {
                        Err(self.err(&format!("generator x{g} is the excluded meridian")))
                    }
                    Err(_) => Err(self.err(&format!(
                        "generator x{g} out of range 1..={}",
                        self.ctx.arity()
                    ))),
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(WordExpr::Commutator(Box::new(a), Box::new(b)))
            }
            _ => Err(self.err("expected `x<k>`, `(`, or `[`")),
        }
    }

    fn unsigned_int(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("digits are ascii")
            .parse::<u32>()
            .map_err(|_| self.err("integer too large"))
    }

    fn signed_int(&mut self) -> Result<i32> {
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let mag = self.unsigned_int()? as i64;
        i32::try_from(sign * mag).map_err(|_| self.err("exponent too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Polynomial;

    fn ctx(n: u8, i: u8) -> Ctx {
        Ctx::new(n, i).unwrap()
    }

    fn flat(text: &str, c: Ctx) -> Word {
        parse_word(text, c).unwrap().flatten(c).unwrap()
    }

    fn poly(c: Ctx, terms: &[(&[u8], i64)]) -> Polynomial {
        Polynomial::from_terms(c, terms.iter().map(|(m, k)| (m.to_vec(), *k))).unwrap()
    }

    #[test]
    fn parse_nested_commutator() {
        let c = ctx(4, 4);
        let e = parse_word("[x1,[x2,x3]]", c).unwrap();
        assert_eq!(
            e,
            WordExpr::Commutator(
                Box::new(WordExpr::Gen(1)),
                Box::new(WordExpr::Commutator(
                    Box::new(WordExpr::Gen(2)),
                    Box::new(WordExpr::Gen(3)),
                )),
            )
        );
    }

    #[test]
    fn parse_inverse_and_conjugate() {
        let c = ctx(4, 4);
        let inv = flat("x1^-1", c);
        assert_eq!(inv.letters(), &[Letter::new(1, true)]);
        // x1^[x2,x3] flattens to [x2,x3]^-1 x1 [x2,x3]
        let conj = flat("x1^[x2,x3]", c);
        let manual = flat("[x2,x3]^-1 x1 [x2,x3]", c);
        assert_eq!(conj.letters(), manual.letters());
    }

    #[test]
    fn parse_errors_carry_position() {
        let c = ctx(3, 3);
        assert!(matches!(parse_word("x1 x", c), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("x3", c), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_word("x9", c), Err(Error::Parse { .. })));
        assert!(matches!(parse_word("[x1,x2", c), Err(Error::Parse { .. })));
        assert!(parse_word("", c).is_ok());
    }

    #[test]
    fn powers_expand_to_letters() {
        let c = ctx(3, 3);
        assert_eq!(flat("x1^3", c).len(), 3);
        assert_eq!(flat("x1^0", c).len(), 0);
        let w = flat("x1^-2", c);
        assert_eq!(w.letters(), &[Letter::new(1, true), Letter::new(1, true)]);
        // compound power
        let w = flat("(x1 x2)^-1", c);
        assert_eq!(w.letters(), &[Letter::new(2, true), Letter::new(1, true)]);
    }

    #[test]
    fn expansion_frozen_values() {
        let c = ctx(3, 3);
        assert_eq!(
            flat("x1^-1", c).magnus_expand(),
            poly(c, &[(&[], 1), (&[1], -1)])
        );
        // the four group elements computed for the 3-component example
        assert_eq!(
            flat("x1 x2^-1", c).magnus_expand(),
            poly(c, &[(&[], 1), (&[1], 1), (&[2], -1), (&[1, 2], -1)])
        );
        assert_eq!(
            flat("x2 x1", c).magnus_expand(),
            poly(c, &[(&[], 1), (&[1], 1), (&[2], 1), (&[2, 1], 1)])
        );
        assert_eq!(
            flat("x2 x1 x2^-1", c).magnus_expand(),
            poly(c, &[(&[], 1), (&[1], 1), (&[2, 1], 1), (&[1, 2], -1)])
        );
        // a commutator in a 4-component context
        let c4 = ctx(4, 1);
        assert_eq!(
            flat("[x2,x3]", c4).magnus_expand(),
            poly(c4, &[(&[], 1), (&[2, 3], 1), (&[3, 2], -1)])
        );
    }

    #[test]
    fn rf_equal_on_relators_and_reductions() {
        let c = ctx(4, 4);
        // defining relation of the reduced group: [x_j, x_j^g] = 1
        let rel = flat("[x2, x2^(x1 x3 x1^-1)]", c);
        assert!(rf_equal(&rel, &Word::empty(c)));
        // free reduction
        let w = flat("x1 x2 x2^-1 x1^-1 x1", c);
        assert!(rf_equal(&w, &flat("x1", c)));
        assert!(!rf_equal(&flat("x1 x2", c), &flat("x2 x1", c)));
    }

    #[test]
    fn positivity() {
        let c = ctx(3, 3);
        assert!(flat("x1 x2^-1", c).is_positive());
        assert!(!flat("x1^-1", c).is_positive());
        assert!(Word::empty(c).is_positive());
        assert!(flat("x2 x1", c).is_positive());

        let (w, inv) = flat("x2^-1", c).positive_normalize();
        assert!(inv);
        assert_eq!(w.letters(), &[Letter::new(2, false)]);
        let (w, inv) = flat("x2 x1", c).positive_normalize();
        assert!(!inv);
        assert_eq!(w.len(), 2);
        let (w, inv) = Word::empty(c).positive_normalize();
        assert!(!inv && w.is_empty());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let c = ctx(5, 5);
        for text in [
            "[x1,[x2,[x3,x4]]]",
            "x1^[x2,x3]",
            "x1 x2^-1 (x3 x4)^-1",
            "x1^-3 [x2,x3 x4]",
        ] {
            let e = parse_word(text, c).unwrap();
            let rendered = e.to_string();
            let back = parse_word(&rendered, c).unwrap();
            assert!(
                rf_equal(&e.flatten(c).unwrap(), &back.flatten(c).unwrap()),
                "round trip failed for `{text}` -> `{rendered}`"
            );
        }
    }
}
