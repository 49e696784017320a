//! Resultants and discriminants over Z[x1..xn].

use num_bigint::BigInt;

use super::ProjError;
use crate::polysys::{PolyError, Polynomial};

/// Sylvester matrix of `p` and `q` with respect to `x_v`. Rows `0..deg q` hold
/// shifted coefficients of `p`, the remaining `deg p` rows those of `q`, leading
/// coefficient first.
pub fn sylvester_matrix(p: &Polynomial, q: &Polynomial, v: usize) -> Vec<Vec<Polynomial>> {
    let n_vars = p.n_vars();
    let a = p.coefficients_in(v);
    let b = q.coefficients_in(v);
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = vec![vec![Polynomial::zero(n_vars); size]; size];
    for r in 0..n {
        for k in 0..=m {
            rows[r][r + k] = a[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            rows[n + r][r + k] = b[n - k].clone();
        }
    }
    rows
}

/// Fraction-free Gaussian elimination (Bareiss); every division is exact.
pub fn determinant(mut a: Vec<Vec<Polynomial>>, n_vars: usize) -> Result<Polynomial, PolyError> {
    let k = a.len();
    if k == 0 {
        return Ok(Polynomial::constant(n_vars, 1));
    }
    let mut negate = false;
    let mut prev = Polynomial::constant(n_vars, 1);
    for i in 0..k - 1 {
        if a[i][i].is_zero() {
            match (i + 1..k).find(|&r| !a[r][i].is_zero()) {
                Some(r) => {
                    a.swap(i, r);
                    negate = !negate;
                }
                None => return Ok(Polynomial::zero(n_vars)),
            }
        }
        for r in i + 1..k {
            for c in i + 1..k {
                let num = &(&a[r][c] * &a[i][i]) - &(&a[r][i] * &a[i][c]);
                a[r][c] = num.exact_div(&prev)?;
            }
            a[r][i] = Polynomial::zero(n_vars);
        }
        prev = a[i][i].clone();
    }
    let det = a[k - 1][k - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Resultant of `p` and `q` with respect to `x_v`, as a polynomial in the other
/// variables (exponent of `x_v` is zero in every term).
pub fn resultant(p: &Polynomial, q: &Polynomial, v: usize) -> Result<Polynomial, ProjError> {
    if p.is_zero() || q.is_zero() {
        return Err(ProjError::ZeroInput);
    }
    if p.degree_in(v) == 0 && q.degree_in(v) == 0 {
        return Err(ProjError::BothConstantIn(v));
    }
    Ok(subresultant(p.coefficients_in(v), q.coefficients_in(v), p.n_vars())?)
}

fn trim(c: &mut Vec<Polynomial>) {
    while c.last().is_some_and(Polynomial::is_zero) {
        c.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (coefficient vectors, entry `i` for `x^i`):
/// `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
fn prem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = (a.len() - b.len() + 1) as u32;
    while r.len() > db {
        let d = r.len() - 1;
        let lr = r[d].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &lr * bj;
            r[j + d - db] = &r[j + d - db] - &t;
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Subresultant PRS: the same value as the Sylvester determinant with
/// O(deg^2) ring operations instead of O(deg^3).
fn subresultant(a: Vec<Polynomial>, b: Vec<Polynomial>, n_vars: usize) -> Result<Polynomial, PolyError> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    if n == 0 {
        return Ok(b[0].pow(m as u32));
    }
    if m == 0 {
        return Ok(a[0].pow(n as u32));
    }
    let mut negate = false;
    let (mut a, mut b) = if m < n {
        negate = m % 2 == 1 && n % 2 == 1;
        (b, a)
    } else {
        (a, b)
    };
    let mut g = Polynomial::constant(n_vars, 1);
    let mut h = Polynomial::constant(n_vars, 1);
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return Ok(Polynomial::zero(n_vars));
        }
        let div = &g * &h.pow(delta);
        a = b;
        b = r.iter().map(|c| c.exact_div(&div)).collect::<Result<_, _>>()?;
        g = a[a.len() - 1].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).exact_div(&h.pow(delta - 1))?,
        };
        if b.len() == 1 {
            let da = (a.len() - 1) as u32;
            let res = if da == 1 { b[0].clone() } else { b[0].pow(da).exact_div(&h.pow(da - 1))? };
            return Ok(if negate { -&res } else { res });
        }
    }
}

/// `(-1)^(d(d-1)/2) * Res(p, dp/dx_v) / lc(p)` for `d = deg_v p >= 2`.
pub fn discriminant(p: &Polynomial, v: usize) -> Result<Polynomial, ProjError> {
    let d = p.degree_in(v);
    if d < 2 {
        return Err(ProjError::DegreeTooLow { var: v, degree: d });
    }
    let res = resultant(p, &p.derivative(v), v)?;
    let lc = p.coefficients_in(v).pop().expect("nonzero polynomial");
    let q = res.exact_div(&lc)?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.scale(&BigInt::from(-1)) } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::parse_infix;

    fn poly(text: &str, vars: &[&str]) -> Polynomial {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        parse_infix(text, &names).unwrap().polys()[0].clone()
    }

    #[test]
    fn small_resultants() {
        let v = ["x"];
        assert_eq!(resultant(&poly("x-1", &v), &poly("x+1", &v), 0).unwrap(), poly("2", &v));
        assert_eq!(resultant(&poly("x^2+1", &v), &poly("x+1", &v), 0).unwrap(), poly("2", &v));
        // Res(p, c) = c^deg p
        assert_eq!(resultant(&poly("x^3+x+5", &v), &poly("7", &v), 0).unwrap(), poly("343", &v));
        assert_eq!(resultant(&poly("3", &v), &poly("x^2-4", &v), 0).unwrap(), poly("9", &v));
        assert!(matches!(resultant(&poly("3", &v), &poly("5", &v), 0), Err(ProjError::BothConstantIn(0))));
    }

    #[test]
    fn subresultant_matches_sylvester_determinant() {
        let v = ["x", "y", "z"];
        let cases = [
            ("x^3*y + 2*x^2 - z", "y*x^2 - 3*x + y*z"),
            ("x^4 + y*x + 1", "x^2*z - y"),
            ("y*x - z", "x^5 - y^2*x^3 + 7"),
            ("(x-y)^2*(x+z)", "x^2 + y*x + z^2"),
        ];
        for (p, q) in cases {
            let (p, q) = (poly(p, &v), poly(q, &v));
            for var in 0..3 {
                let det = determinant(sylvester_matrix(&p, &q, var), 3).unwrap();
                assert_eq!(resultant(&p, &q, var).unwrap(), det, "{p} / {q} in {var}");
            }
        }
    }

    #[test]
    fn common_root_gives_zero() {
        let v = ["x", "y"];
        let r = resultant(&poly("(x-y)*(x+1)", &v), &poly("(x-y)*(x-2)", &v), 0).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn quadratic_discriminant() {
        let v = ["x", "a", "b", "c"];
        let d = discriminant(&poly("a*x^2 + b*x + c", &v), 0).unwrap();
        assert_eq!(d, poly("b^2 - 4*a*c", &v));
        assert_eq!(discriminant(&poly("x^2 - 1", &v), 0).unwrap(), poly("4", &v));
    }

    #[test]
    fn depressed_cubic_discriminant() {
        let v = ["x", "p", "q"];
        let d = discriminant(&poly("x^3 + p*x + q", &v), 0).unwrap();
        assert_eq!(d, poly("-4*p^3 - 27*q^2", &v));
    }

    #[test]
    fn discriminant_needs_degree_two() {
        let v = ["x", "y"];
        assert!(matches!(discriminant(&poly("x*y + 1", &v), 0), Err(ProjError::DegreeTooLow { degree: 1, .. })));
    }
}
