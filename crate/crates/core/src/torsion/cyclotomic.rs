//! Exact arithmetic in the cyclotomic field Q(zeta_m) = Q[x] / Phi_m(x).

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::group_algebra::RingElement;

/// Polynomials with rational coefficients, lowest degree first, no trailing
/// zeros (the zero polynomial is empty).
type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    out.resize(a.len().max(b.len()), BigRational::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Quotient and remainder; `b` nonzero.
fn poly_divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / lead;
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn int_poly(coeffs: &[i64]) -> Poly {
    trim(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
}

/// `Phi_m` from `x^m - 1 = prod_{d | m} Phi_d`.
fn cyclotomic_polynomial(m: usize) -> Poly {
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    let mut p = int_poly(&p);
    for d in (1..m).filter(|d| m % d == 0) {
        p = poly_divmod(&p, &cyclotomic_polynomial(d)).0;
    }
    p
}

pub(crate) struct CyclotomicField {
    m: usize,
    modulus: Poly,
}

/// An element of Q(zeta_m), reduced modulo `Phi_m`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Cyclotomic(Poly);

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Total bit length of numerators and denominators.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|c| c.numer().bits() + c.denom().bits()).sum()
    }
}

impl CyclotomicField {
    pub fn new(m: usize) -> Self {
        CyclotomicField {
            m,
            modulus: cyclotomic_polynomial(m),
        }
    }

    fn reduce(&self, p: Poly) -> Cyclotomic {
        Cyclotomic(poly_divmod(&trim(p), &self.modulus).1)
    }

    pub fn one(&self) -> Cyclotomic {
        Cyclotomic(int_poly(&[1]))
    }

    /// Image of `a` in Z[Z/n] under `t -> x`, for `m` dividing `n`.
    pub fn image(&self, a: &RingElement) -> Cyclotomic {
        let mut p = vec![BigRational::zero(); self.m];
        for (k, c) in a.terms() {
            p[k % self.m] += BigRational::from_integer(c.clone());
        }
        self.reduce(p)
    }

    pub fn sub(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(poly_sub(&a.0, &b.0))
    }

    pub fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        self.reduce(poly_mul(&a.0, &b.0))
    }

    /// Inverse of a nonzero element by the extended Euclidean algorithm.
    pub fn inv(&self, a: &Cyclotomic) -> Cyclotomic {
        assert!(!a.is_zero(), "inverting zero");
        // invariant: s_i * a = r_i (mod modulus)
        let (mut r0, mut r1) = (self.modulus.clone(), a.0.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), int_poly(&[1]));
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        let c = r1[0].clone();
        self.reduce(s1.into_iter().map(|x| x / &c).collect())
    }

    /// `x -> exp(2 pi i r / m)`, summed in fixed point so that conjugates
    /// much smaller than the coefficients keep full relative precision.
    pub fn embed(&self, a: &Cyclotomic, r: usize) -> Complex64 {
        let table = roots_of_unity(self.m);
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for (k, c) in a.0.iter().enumerate() {
            let (cos, sin) = &table[(r * k) % self.m];
            re += (c.numer() * cos) / c.denom();
            im += (c.numer() * sin) / c.denom();
        }
        Complex64::new(fixed_to_f64(&re), fixed_to_f64(&im))
    }
}

/// Fractional bits of the fixed-point evaluation.
const PRECISION: u64 = 256;
const GUARD: u64 = 32;

fn fixed_to_f64(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let mantissa = (x >> shift).to_f64().unwrap_or(0.0);
    let exponent = shift as i64 - PRECISION as i64;
    mantissa * 2f64.powi(exponent.clamp(-2000, 2000) as i32)
}

/// `atan(1/x)` scaled by `2^bits`.
fn atan_inverse(x: u32, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = power.clone();
    let mut k = 1u32;
    while !power.is_zero() {
        power /= &x2;
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// `(cos, sin)` of `2 pi a / m` for `a = 0..m`, scaled by `2^PRECISION`.
fn roots_of_unity(m: usize) -> Rc<Vec<(BigInt, BigInt)>> {
    type Table = Rc<Vec<(BigInt, BigInt)>>;
    thread_local! {
        static CACHE: RefCell<HashMap<usize, Table>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(m)
            .or_insert_with(|| Rc::new(compute_roots(m)))
            .clone()
    })
}

fn compute_roots(m: usize) -> Vec<(BigInt, BigInt)> {
    let bits = PRECISION + GUARD;
    let one = BigInt::one() << bits;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let pi = atan_inverse(5, bits) * 16 - atan_inverse(239, bits) * 4;
    let theta = pi * 2 / m;
    let (mut cos, mut sin) = (BigInt::zero(), BigInt::zero());
    let mut term = one.clone();
    let mut k = 0u32;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = ((term * &theta) >> bits) / k;
    }
    let mut out = Vec::with_capacity(m);
    let (mut c, mut s) = (one, BigInt::zero());
    for _ in 0..m {
        out.push((&c >> GUARD, &s >> GUARD));
        let next_c = (&c * &cos - &s * &sin) >> bits;
        let next_s = (&c * &sin + &s * &cos) >> bits;
        (c, s) = (next_c, next_s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_algebra::GroupSpec;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), int_poly(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), int_poly(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), int_poly(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), int_poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn inverse_and_embedding() {
        let g = GroupSpec::cyclic(5).unwrap();
        let f = CyclotomicField::new(5);
        let u = f.image(&RingElement::parse(&g, "1 - t - t^4").unwrap());
        let v = f.inv(&u);
        assert_eq!(f.mul(&u, &v), f.one());
        assert_eq!(v, f.image(&RingElement::parse(&g, "1 - t^2 - t^3").unwrap()));
        let z = f.embed(&u, 2);
        let direct = 1.0 - Complex64::from_polar(1.0, 0.8 * std::f64::consts::PI) - Complex64::from_polar(1.0, 3.2 * std::f64::consts::PI);
        assert!((z - direct).norm() < 1e-12);
        let norm = f.image(&RingElement::parse(&g, "1 + t + t^2 + t^3 + t^4").unwrap());
        assert!(norm.is_zero());
    }

    #[test]
    fn rational_field() {
        let g = GroupSpec::cyclic(4).unwrap();
        let f = CyclotomicField::new(1);
        let a = f.image(&RingElement::parse(&g, "3 - t^2 + t^3").unwrap());
        assert_eq!(f.embed(&a, 0), Complex64::new(3.0, 0.0));
        assert_eq!(f.embed(&f.inv(&a), 0), Complex64::new(1.0 / 3.0, 0.0));
    }
}
