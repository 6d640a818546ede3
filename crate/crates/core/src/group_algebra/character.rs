use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::ring::RingElement;
use super::AlgebraError;

/// Evaluates `a` under the character `t -> exp(2*pi*i*j/n)` of Z/n.
///
/// The trivial character (`j = 0`) is the augmentation and is computed in
/// exact integer arithmetic before conversion.
pub fn character_eval(a: &RingElement, j: usize) -> Result<Complex64, AlgebraError> {
    let n = a
        .group()
        .cyclic_order()
        .ok_or(AlgebraError::NotCyclic)?;
    if j >= n {
        return Err(AlgebraError::CharacterOutOfRange { j, n });
    }
    if j == 0 {
        let aug = a.augmentation().to_f64().unwrap_or(f64::NAN);
        return Ok(Complex64::new(aug, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, c) in a.terms() {
        // reduce the exponent first so the angle stays in [0, 2*pi)
        let angle = TAU * ((j * k) % n) as f64 / n as f64;
        sum += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
    }
    Ok(sum)
}

/// `exp(2*pi*i*k/n)`.
pub fn root_of_unity(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}
