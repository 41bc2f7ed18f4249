//! Central finite differences with Richardson extrapolation.

use super::quadrature::Estimate;
use crate::error::{Error, Result};

fn binomial(n: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central n-th difference quotient with spacing `h`; truncation error is O(h²).
fn central_difference<G>(g: &G, v: f64, n: usize, h: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    let mut acc = 0.0;
    for j in 0..=n {
        let offset = (n as f64 / 2.0 - j as f64) * h;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(n, j) * g(v + offset)?;
    }
    Ok(acc / h.powi(n as i32))
}

/// n-th derivative of `g` at `v`, starting from spacing `h0` and halving it
/// `levels − 1` times. The error estimate is the change along the last
/// diagonal of the extrapolation table.
pub fn nth_derivative<G>(g: G, v: f64, n: usize, h0: f64, levels: usize) -> Result<Estimate>
where
    G: Fn(f64) -> Result<f64>,
{
    if n == 0 {
        let value = g(v)?;
        return Ok(Estimate { value, error: 0.0 });
    }
    if !(h0 > 0.0) || levels == 0 {
        return Err(Error::Domain(format!(
            "invalid finite-difference step {h0} / levels {levels}"
        )));
    }
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut h = h0;
    for i in 0..levels {
        let mut row = vec![central_difference(&g, v, n, h)?];
        for l in 1..=i {
            let factor = 4f64.powi(l as i32);
            let prev = row[l - 1];
            row.push(prev + (prev - table[i - 1][l - 1]) / (factor - 1.0));
        }
        table.push(row);
        h *= 0.5;
    }
    let last = levels - 1;
    let value = table[last][last];
    let error = if last == 0 {
        f64::INFINITY
    } else {
        (value - table[last - 1][last - 1]).abs()
    };
    Ok(Estimate { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_exp() {
        for n in 1..=3 {
            let d = nth_derivative(|x: f64| Ok(x.exp()), 0.7, n, 1e-2, 3).unwrap();
            assert!((d.value - 0.7f64.exp()).abs() < 1e-6, "n={n}: {d:?}");
        }
    }

    #[test]
    fn polynomial_is_exact_up_to_rounding() {
        let d = nth_derivative(|x: f64| Ok(x * x * x), 2.0, 2, 1e-2, 3).unwrap();
        assert!((d.value - 12.0).abs() < 1e-9);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(3, 0), 1.0);
        assert_eq!(binomial(3, 3), 1.0);
    }
}
