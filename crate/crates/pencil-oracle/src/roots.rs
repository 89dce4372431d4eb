//! Approximate roots of square-free polynomials by the Aberth–Ehrlich
//! simultaneous iteration. Inputs here always come from exact square-free
//! factors, so all roots are simple and the iteration is benign; the payoff
//! is that this crate needs no external eigensolver.

use num_complex::Complex64;

/// All roots of the polynomial with ascending complex coefficients.
/// Panics when the iteration fails to converge — for the oracle, a loud
/// failure beats a wrong certificate.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().map_or(false, |z| z.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = *c.last().unwrap();
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();

    // Cauchy-style inclusion radius.
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
    let mut zs: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.35) / deg as f64;
            Complex64::from_polar(radius * 0.8, angle)
        })
        .collect();

    let eval = |z: Complex64| -> (Complex64, Complex64) {
        // Horner for p and p'.
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &ck in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + ck;
        }
        (p, dp)
    };

    let tol = 1e-13 * radius.max(1.0);
    for _iter in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = eval(zs[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { p };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let diff = zs[i] - zs[j];
                    if diff.norm() > 1e-300 {
                        repulse += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            zs[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < tol {
            // Converged; polish once with plain Newton.
            for z in zs.iter_mut() {
                let (p, dp) = eval(*z);
                if dp.norm() > 0.0 {
                    *z -= p / dp;
                }
            }
            return zs;
        }
    }
    panic!("oracle root iteration failed to converge (degree {deg})");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        // s^2 + 1 → ±i
        let mut r = roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn well_separated_reals() {
        // (s-1)(s-2)(s+4) = s^3 + s^2 - 10s + 8
        let mut r = roots(&[c(8.0, 0.0), c(-10.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-4.0, 0.0)).norm() < 1e-9);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-9);
        assert!((r[2] - c(2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(roots(&[c(3.0, 0.0)]).is_empty());
    }
}
