use crate::error::{Error, Result};
use crate::poly::matrix::det_bareiss;
use crate::poly::Polynomial;

/// Sylvester matrix of `f` and `g` with respect to `var`, `f` rows first.
///
/// A zero polynomial is treated as the constant 0 of degree 0.
pub fn sylvester_matrix(f: &Polynomial, g: &Polynomial, var: usize) -> Vec<Vec<Polynomial>> {
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    let size = m + n;
    let zero = Polynomial::zero(f.ring());
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res_var(f, g)` as the determinant of the Sylvester matrix.
///
/// For monic `f` with roots `b_i` this equals `prod g(b_i)`; in particular
/// `Res(m, 1) = 1` and `Res(m, c) = c^deg m`.
pub fn sylvester_resultant(f: &Polynomial, g: &Polynomial, var: usize) -> Result<Polynomial> {
    f.ring().ensure_same(g.ring())?;
    if var >= f.ring().nvars() {
        return Err(Error::usage(format!("variable index {var} out of range")));
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::usage("resultant of two zero polynomials"));
    }
    det_bareiss(f.ring(), &sylvester_matrix(f, g, var))
}
