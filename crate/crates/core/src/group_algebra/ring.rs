use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::group::{GroupElement, GroupSpec};
use super::AlgebraError;

/// An element of the integral group ring Z[G].
///
/// Terms are keyed by the canonical index of the group element and never
/// carry a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    group: GroupSpec,
    terms: BTreeMap<usize, BigInt>,
}

impl RingElement {
    pub fn zero(group: &GroupSpec) -> Self {
        RingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &GroupSpec) -> Self {
        Self::from_int(group, 1)
    }

    pub fn from_int(group: &GroupSpec, c: impl Into<BigInt>) -> Self {
        Self::monomial(group, group.identity(), c)
    }

    /// `c * g` where `g` is given by canonical index (reduced for cyclic groups).
    pub fn monomial(group: &GroupSpec, g: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let g = match group {
                GroupSpec::Cyclic(n) => g % n,
                _ => g,
            };
            assert!(g < group.order(), "group index {g} out of range");
            terms.insert(g, c);
        }
        RingElement {
            group: group.clone(),
            terms,
        }
    }

    /// Builds an element of Z[Z/n] from the coefficient list of `1, t, t^2, ...`.
    pub fn from_coeffs(group: &GroupSpec, coeffs: &[i64]) -> Self {
        let mut out = Self::zero(group);
        for (k, &c) in coeffs.iter().enumerate() {
            out.add_term(k % group.order(), BigInt::from(c));
        }
        out
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, g: usize) -> BigInt {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&self.group.identity())
                .is_some_and(|c| c.is_one())
    }

    /// Sum of the coefficients (the image under G -> 1).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Largest absolute coefficient, used for growth diagnostics.
    pub fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn add_term(&mut self, g: usize, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    fn check_group(&self, other: &RingElement) -> Result<(), AlgebraError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(AlgebraError::GroupMismatch)
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement, AlgebraError> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (&g, c) in &other.terms {
            out.add_term(g, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement, AlgebraError> {
        self.try_add(&-other)
    }

    /// Convolution product using the group law.
    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement, AlgebraError> {
        self.check_group(other)?;
        let mut out = RingElement::zero(&self.group);
        for (&g, a) in &self.terms {
            for (&h, b) in &other.terms {
                out.add_term(self.group.mul(g, h), a * b);
            }
        }
        Ok(out)
    }

    /// Left multiplication by a group element.
    pub fn shift_left(&self, g: usize) -> RingElement {
        RingElement {
            group: self.group.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&h, c)| (self.group.mul(g, h), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        if c.is_zero() {
            return RingElement::zero(&self.group);
        }
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(&g, a)| (g, a * c)).collect(),
        }
    }

    pub fn as_trivial_unit(&self) -> Option<TrivialUnit> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&g, c) = self.terms.iter().next()?;
        let sign = if c.is_one() {
            1
        } else if (-c).is_one() {
            -1
        } else {
            return None;
        };
        Some(TrivialUnit {
            sign,
            g: self.group.element(g).ok()?,
        })
    }

    pub fn is_trivial_unit(&self) -> bool {
        self.as_trivial_unit().is_some()
    }

    /// Parses the text form, e.g. `1 - t^2 + 3*t^5` (cyclic) or `2*g3 - 1` (table).
    pub fn parse(group: &GroupSpec, text: &str) -> Result<RingElement, AlgebraError> {
        Parser {
            group,
            src: text,
            pos: 0,
        }
        .parse()
    }

    fn fmt_monomial(&self, g: usize) -> Option<String> {
        if g == self.group.identity() {
            return None;
        }
        Some(match &self.group {
            GroupSpec::Table(_) => format!("g{g}"),
            _ if g == 1 => "t".to_string(),
            _ => format!("t^{g}"),
        })
    }
}

/// Canonical text: ascending exponent (identity first), explicit separators.
impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let id = self.group.identity();
        let ordered = self
            .terms
            .get_key_value(&id)
            .into_iter()
            .chain(self.terms.iter().filter(|(g, _)| **g != id));
        for (i, (&g, c)) in ordered.enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            match self.fmt_monomial(g) {
                None => write!(f, "{abs}")?,
                Some(m) if abs.is_one() => write!(f, "{m}")?,
                Some(m) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    group: &'a GroupSpec,
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            text: self.src.to_string(),
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            BigInt::from_str(&self.src[start..self.pos]).ok()
        }
    }

    fn signed_index(&mut self) -> Result<i64, AlgebraError> {
        let neg = self.eat('-');
        let v = self
            .digits()
            .and_then(|d| i64::try_from(d).ok())
            .ok_or_else(|| self.err("expected exponent"))?;
        Ok(if neg { -v } else { v })
    }

    /// Returns the canonical group index of a monomial symbol, if one follows.
    fn monomial(&mut self) -> Result<Option<usize>, AlgebraError> {
        self.skip_ws();
        match (self.peek(), self.group) {
            (Some('t'), GroupSpec::Cyclic(_) | GroupSpec::Trivial) => {
                self.pos += 1;
                let k = if self.eat('^') { self.signed_index()? } else { 1 };
                let n = self.group.order() as i64;
                Ok(Some(k.rem_euclid(n) as usize))
            }
            (Some('g'), GroupSpec::Table(_)) => {
                self.pos += 1;
                let at = self.pos;
                let k = self.signed_index()?;
                if k < 0 || k as usize >= self.group.order() {
                    self.pos = at;
                    return Err(self.err("group element index out of range"));
                }
                Ok(Some(k as usize))
            }
            _ => Ok(None),
        }
    }

    fn parse(mut self) -> Result<RingElement, AlgebraError> {
        let mut out = RingElement::zero(self.group);
        let mut first = true;
        loop {
            self.skip_ws();
            if self.pos == self.src.len() {
                if first {
                    return Err(self.err("empty ring element"));
                }
                return Ok(out);
            }
            let mut sign = BigInt::one();
            if self.eat('-') {
                sign = -sign;
            } else if !self.eat('+') && !first {
                return Err(self.err("expected '+' or '-'"));
            }
            first = false;
            let (coeff, g) = match self.digits() {
                Some(c) => {
                    if self.eat('*') {
                        let g = self.monomial()?.ok_or_else(|| self.err("expected monomial"))?;
                        (c, g)
                    } else {
                        (c, self.group.identity())
                    }
                }
                None => {
                    let g = self.monomial()?.ok_or_else(|| self.err("expected term"))?;
                    (BigInt::one(), g)
                }
            };
            out.add_term(g, sign * coeff);
        }
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        self.try_add(rhs).expect("group mismatch in ring addition")
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        self.try_sub(rhs).expect("group mismatch in ring subtraction")
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        self.try_mul(rhs).expect("group mismatch in ring multiplication")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(&g, c)| (g, -c)).collect(),
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

/// A unit of the form `±g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialUnit {
    pub sign: i8,
    pub g: GroupElement,
}

impl TrivialUnit {
    pub fn new(sign: i8, g: GroupElement) -> Result<Self, AlgebraError> {
        if sign != 1 && sign != -1 {
            return Err(AlgebraError::NotATrivialUnit(format!("sign {sign}")));
        }
        Ok(TrivialUnit { sign, g })
    }

    pub fn one(group: &GroupSpec) -> Self {
        TrivialUnit {
            sign: 1,
            g: group.identity_element(),
        }
    }

    pub fn group(&self) -> &GroupSpec {
        self.g.group()
    }

    pub fn inverse(&self) -> TrivialUnit {
        TrivialUnit {
            sign: self.sign,
            g: self.g.inverse(),
        }
    }

    pub fn negate(&self) -> TrivialUnit {
        TrivialUnit {
            sign: -self.sign,
            g: self.g.clone(),
        }
    }

    pub fn to_ring(&self) -> RingElement {
        RingElement::monomial(self.g.group(), self.g.index(), self.sign as i64)
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.g.index() == self.g.group().identity()
    }

    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self, AlgebraError> {
        RingElement::parse(group, text)?
            .as_trivial_unit()
            .ok_or_else(|| AlgebraError::NotATrivialUnit(text.to_string()))
    }
}

impl fmt::Display for TrivialUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_ring().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn p(g: &GroupSpec, s: &str) -> RingElement {
        RingElement::parse(g, s).unwrap()
    }

    #[test]
    fn addition_examples() {
        let g = z(5);
        assert_eq!(&p(&g, "t + 1") + &p(&g, "-t"), p(&g, "1"));
        let a = p(&g, "3 - 2*t^4");
        assert_eq!(&a + &RingElement::zero(&g), a);
        let g4 = z(4);
        assert_eq!(&p(&g4, "2*t^2 + 3") + &p(&g4, "t^2 - 3"), p(&g4, "3*t^2"));
    }

    #[test]
    fn multiplication_examples() {
        let g2 = z(2);
        assert!((&p(&g2, "t + 1") * &p(&g2, "t - 1")).is_zero());
        let g5 = z(5);
        let a = p(&g5, "2 - t^3");
        assert_eq!(&RingElement::one(&g5) * &a, a);
        let norm = p(&g5, "1 + t + t^2 + t^3 + t^4");
        assert!((&norm * &p(&g5, "t - 1")).is_zero());
    }

    #[test]
    fn group_mismatch_is_an_error() {
        let a = RingElement::one(&z(3));
        let b = RingElement::one(&z(4));
        assert_eq!(a.try_add(&b), Err(AlgebraError::GroupMismatch));
        assert_eq!(a.try_mul(&b), Err(AlgebraError::GroupMismatch));
    }

    #[test]
    fn canonical_text() {
        let g = z(7);
        let a = p(&g, "3*t^5 + 1 - t^2");
        assert_eq!(a.to_string(), "1 - t^2 + 3*t^5");
        assert_eq!(p(&g, "-t + t^8").to_string(), "0");
        assert_eq!(p(&g, "-2 -t").to_string(), "-2 - t");
        assert_eq!(p(&g, "t^-1").to_string(), "t^6");
        assert_eq!(RingElement::zero(&g).to_string(), "0");
        assert_eq!(p(&GroupSpec::Trivial, "-3").to_string(), "-3");
    }

    #[test]
    fn parse_errors_carry_position() {
        let g = z(3);
        for bad in ["", "1 +", "2 t", "x", "3*", "t^"] {
            assert!(RingElement::parse(&g, bad).is_err(), "{bad:?}");
        }
        match RingElement::parse(&g, "1 + q") {
            Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_units() {
        let g = z(7);
        let u = TrivialUnit::parse(&g, "-t^3").unwrap();
        assert_eq!(u.sign, -1);
        assert_eq!(&u.to_ring() * &u.inverse().to_ring(), RingElement::one(&g));
        assert!(TrivialUnit::parse(&g, "2*t").is_err());
        assert!(TrivialUnit::parse(&g, "1 + t").is_err());
    }

    #[test]
    fn cyclotomic_unit_of_z5() {
        let g = z(5);
        let u = p(&g, "1 - t - t^4");
        assert!((&u * &p(&g, "1 - t^2 - t^3")).is_one());
        assert!(!u.is_trivial_unit());
    }
}
