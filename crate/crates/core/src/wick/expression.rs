//! Canonical sums of propagator products times normal-ordered words.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};

/// A linear string field at vertex `vertex` (1-based), optionally restricted
/// to piece `piece` of its string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSymbol {
    pub vertex: usize,
    pub piece: Option<usize>,
}

impl FieldSymbol {
    pub fn whole(vertex: usize) -> Self {
        FieldSymbol { vertex, piece: None }
    }

    pub fn on_piece(vertex: usize, piece: usize) -> Self {
        FieldSymbol { vertex, piece: Some(piece) }
    }
}

impl fmt::Display for FieldSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.piece {
            None => write!(f, "φ({})", self.vertex),
            Some(a) => write!(f, "φ^{}({})", a, self.vertex),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SymbolRepr {
    Whole(usize),
    Piece([usize; 2]),
}

impl Serialize for FieldSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.piece {
            None => SymbolRepr::Whole(self.vertex),
            Some(a) => SymbolRepr::Piece([self.vertex, a]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match SymbolRepr::deserialize(d)? {
            SymbolRepr::Whole(v) => FieldSymbol::whole(v),
            SymbolRepr::Piece([v, a]) => FieldSymbol::on_piece(v, a),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropKind {
    /// Time-ordered vacuum expectation, symmetric.
    Feynman,
    /// Plain vacuum expectation `⟨φ(l) φ(r)⟩`, ordered.
    TwoPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Propagator {
    pub kind: PropKind,
    pub left: FieldSymbol,
    pub right: FieldSymbol,
}

impl Propagator {
    pub fn feynman(a: FieldSymbol, b: FieldSymbol) -> Self {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        Propagator { kind: PropKind::Feynman, left, right }
    }

    pub fn two_point(left: FieldSymbol, right: FieldSymbol) -> Self {
        Propagator { kind: PropKind::TwoPoint, left, right }
    }

    pub fn symbols(&self) -> [FieldSymbol; 2] {
        [self.left, self.right]
    }

    fn map(&self, f: impl Fn(FieldSymbol) -> FieldSymbol) -> Self {
        match self.kind {
            PropKind::Feynman => Propagator::feynman(f(self.left), f(self.right)),
            PropKind::TwoPoint => Propagator::two_point(f(self.left), f(self.right)),
        }
    }
}

impl fmt::Display for Propagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PropKind::Feynman => write!(f, "⟨T {}{}⟩", self.left, self.right),
            PropKind::TwoPoint => write!(f, "⟨{}{}⟩", self.left, self.right),
        }
    }
}

impl Serialize for Propagator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let tag = match self.kind {
            PropKind::Feynman => "F",
            PropKind::TwoPoint => "T",
        };
        (tag, self.left, self.right).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Propagator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (tag, l, r) = <(String, FieldSymbol, FieldSymbol)>::deserialize(d)?;
        match tag.as_str() {
            "F" => Ok(Propagator::feynman(l, r)),
            "T" => Ok(Propagator::two_point(l, r)),
            other => Err(serde::de::Error::custom(format!("unknown propagator kind {other:?}"))),
        }
    }
}

/// Sorted propagators and sorted normal word; ordered by line count first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub props: Vec<Propagator>,
    pub normal: Vec<FieldSymbol>,
}

impl Monomial {
    pub fn new(mut props: Vec<Propagator>, mut normal: Vec<FieldSymbol>) -> Self {
        props.sort();
        normal.sort();
        Monomial { props, normal }
    }

    pub fn unit() -> Self {
        Monomial { props: Vec::new(), normal: Vec::new() }
    }

    pub fn symbols(&self) -> impl Iterator<Item = FieldSymbol> + '_ {
        self.props.iter().flat_map(|p| p.symbols()).chain(self.normal.iter().copied())
    }

    pub fn map_symbols(&self, f: impl Fn(FieldSymbol) -> FieldSymbol + Copy) -> Self {
        Monomial::new(
            self.props.iter().map(|p| p.map(f)).collect(),
            self.normal.iter().map(|&s| f(s)).collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.props
            .len()
            .cmp(&other.props.len())
            .then_with(|| self.props.cmp(&other.props))
            .then_with(|| self.normal.cmp(&other.normal))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Linear combination of monomials in canonical form: like terms merged,
/// zero coefficients dropped, terms sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WickExpression {
    terms: BTreeMap<Monomial, Rational>,
}

impl WickExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Monomial::unit())
    }

    pub fn monomial(coef: Rational, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(coef, m);
        e
    }

    pub fn add_term(&mut self, coef: Rational, m: Monomial) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &WickExpression) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        let mut e = Self::zero();
        for (m, c) in &self.terms {
            e.add_term(c * k, m.clone());
        }
        e
    }

    pub fn sub(&self, other: &WickExpression) -> Self {
        let mut e = self.clone();
        e.add(&other.scaled(&-Rational::one()));
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_symbols(&self, f: impl Fn(FieldSymbol) -> FieldSymbol + Copy) -> Self {
        let mut e = Self::zero();
        for (m, c) in &self.terms {
            e.add_term(c.clone(), m.map_symbols(f));
        }
        e
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        let mut e = Self::zero();
        for (m, c) in &self.terms {
            e.add_term(c.clone(), f(m));
        }
        e
    }

    /// `φ · :B:` for each term: the uncontracted product plus every single
    /// contraction `⟨φ b⟩` with a factor of the normal word.
    pub fn left_multiply(&self, phi: FieldSymbol) -> Self {
        let mut e = Self::zero();
        for (m, c) in &self.terms {
            let mut word = m.normal.clone();
            word.push(phi);
            e.add_term(c.clone(), Monomial::new(m.props.clone(), word));
            for (k, &b) in m.normal.iter().enumerate() {
                let mut props = m.props.clone();
                props.push(Propagator::two_point(phi, b));
                let mut rest = m.normal.clone();
                rest.remove(k);
                e.add_term(c.clone(), Monomial::new(props, rest));
            }
        }
        e
    }

    /// Operator product of two normal-ordered expressions: every partial
    /// matching between the two words contributes `⟨a b⟩` with `a` from the left.
    pub fn operator_product(&self, rhs: &WickExpression) -> Self {
        let mut e = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let coef = ca * cb;
                let mut props = ma.props.clone();
                props.extend(mb.props.iter().copied());
                cross_matchings(&ma.normal, &mb.normal, &mut |lines, left, right| {
                    let mut p = props.clone();
                    p.extend(lines.iter().map(|&(a, b)| Propagator::two_point(a, b)));
                    let mut word = left.to_vec();
                    word.extend_from_slice(right);
                    e.add_term(coef.clone(), Monomial::new(p, word));
                });
            }
        }
        e
    }
}

/// Enumerates matchings between `a` and `b`, passing the contracted pairs and
/// the unmatched remainders.
fn cross_matchings(
    a: &[FieldSymbol],
    b: &[FieldSymbol],
    f: &mut dyn FnMut(&[(FieldSymbol, FieldSymbol)], &[FieldSymbol], &[FieldSymbol]),
) {
    fn go(
        a: &[FieldSymbol],
        b: &mut Vec<Option<FieldSymbol>>,
        lines: &mut Vec<(FieldSymbol, FieldSymbol)>,
        left: &mut Vec<FieldSymbol>,
        f: &mut dyn FnMut(&[(FieldSymbol, FieldSymbol)], &[FieldSymbol], &[FieldSymbol]),
    ) {
        let Some((&first, rest)) = a.split_first() else {
            let right: Vec<FieldSymbol> = b.iter().flatten().copied().collect();
            f(lines, left, &right);
            return;
        };
        left.push(first);
        go(rest, b, lines, left, f);
        left.pop();
        for k in 0..b.len() {
            if let Some(sym) = b[k].take() {
                lines.push((first, sym));
                go(rest, b, lines, left, f);
                lines.pop();
                b[k] = Some(sym);
            }
        }
    }
    let mut slots: Vec<Option<FieldSymbol>> = b.iter().copied().map(Some).collect();
    go(a, &mut slots, &mut Vec::new(), &mut Vec::new(), f);
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "rational::serde_str")]
    coef: Rational,
    props: Vec<Propagator>,
    normal: Vec<FieldSymbol>,
}

#[derive(Serialize, Deserialize)]
struct ExprRepr {
    terms: Vec<TermRepr>,
}

impl Serialize for WickExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExprRepr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { coef: c.clone(), props: m.props.clone(), normal: m.normal.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WickExpression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ExprRepr::deserialize(d)?;
        let mut e = WickExpression::zero();
        for t in repr.terms {
            e.add_term(t.coef, Monomial::new(t.props, t.normal));
        }
        Ok(e)
    }
}

impl fmt::Display for WickExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !c.is_one() {
                parts.push(format!("({c})"));
            }
            parts.extend(m.props.iter().map(ToString::to_string));
            if !m.normal.is_empty() {
                let word: String = m.normal.iter().map(ToString::to_string).collect();
                parts.push(format!(":{word}:"));
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}
