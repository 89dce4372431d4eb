//! Throwaway diagnostics for chasing suite failures; not part of the test
//! suite proper. Run with `cargo test --test scratch -- --nocapture`.

use num_complex::Complex64;
use pencil::placement;
use pencil::rank_one::RankOnePencil;
use pencil::spectral;
use pencil::{bounds, gen, lapack, poly};
use pencil::{ExtComplex, Pencil, Tol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn row_norms(m: &pencil::CMat) -> Vec<f64> {
    (0..m.dim().0)
        .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

fn dump_regularity(sum: &Pencil, tol: &Tol) {
    let n = sum.n();
    println!(
        "sum scale={:.3e} |E|={:.3e} |A|={:.3e}",
        sum.scale(),
        lapack::norm_inf(&sum.e),
        lapack::norm_inf(&sum.a)
    );
    println!("is_regular -> {:?}", sum.is_regular(tol.regularity));
    for node in sum.det_nodes() {
        let m = sum.evaluate(node);
        let d = lapack::det(&m).unwrap();
        let svd = lapack::svd(&m).unwrap();
        let r = node.norm();
        let re = row_norms(&sum.e);
        let ra = row_norms(&sum.a);
        let mut had = 1.0f64;
        for i in 0..n {
            had *= r * re[i] + ra[i];
        }
        println!(
            "  node ({:+.2e},{:+.2e}): |det|={:.3e} bound={:.3e} smin={:.3e} smax={:.3e}",
            node.re,
            node.im,
            d.norm(),
            tol.regularity * had,
            svd.s.last().unwrap(),
            svd.s[0]
        );
    }
}

#[test]
fn probe_a3_regularity() {
    let tol = Tol::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0003);
    let mut dumped = 0;
    let mut failures = 0;
    for i in 0..200 {
        let p = gen::regular_integer_pencil(&mut rng, 2 + i % 4);
        let sd = spectral::eig_structure(&p, &tol).expect("generated pencil analyzes");
        let spec = gen::random_targets(&mut rng, sd.capacity, true);
        let err = match placement::place(&p, &spec, false, &tol) {
            Ok(_) => continue,
            Err(e) => e,
        };
        failures += 1;
        let msg = format!("{err:?}");
        if !msg.contains("lost regularity") {
            let short: String = msg.chars().take(160).collect();
            println!("instance {i}: OTHER failure: {short}");
            continue;
        }
        if dumped >= 2 {
            continue;
        }
        dumped += 1;
        println!("=== instance {i} (n={}) lost regularity ===", p.n());
        println!("targets: {:?}", spec.targets());

        // Replicate the construction to capture the sum pencil.
        let wf = spectral::weierstrass(&p, false, &tol).unwrap();
        let m_a = sd.min_poly.clone();
        let finite: Vec<(Complex64, usize)> = spec.finite_targets().collect();
        let mut chosen = None;
        let mut beta_val = 1.0 + spec.max_finite_abs() + sd.max_finite_abs();
        for _ in 0..50 {
            let beta = Complex64::new(beta_val, 0.0);
            let bx = ExtComplex::Finite(beta);
            let clear = !spec.contains(&bx, tol.cluster)
                && sd.eigs.iter().all(|e| !e.lambda.matches(&bx, tol.cluster));
            if clear {
                let mut den = ONE;
                for &(muz, mi) in &finite {
                    den *= (beta - muz).powi(mi as i32);
                }
                let gamma = m_a.eval(beta) / den;
                if gamma.norm() >= 1e-12 && gamma.norm() <= 1e12 {
                    let q_gamma = poly::poly_from_roots(&finite).scale(gamma);
                    let (p_rhs, rem) = q_gamma.sub(&m_a).div_affine(ONE, beta);
                    if rem.norm() <= 1e-9 * q_gamma.norm_inf().max(1.0) {
                        chosen = Some((beta, gamma, p_rhs));
                        break;
                    }
                }
            }
            beta_val *= 2.0;
        }
        let (beta, gamma, p_rhs) = chosen.expect("ladder");
        println!("beta={beta} gamma={gamma}");
        let (u, v) = placement::solve_theta(&p, &sd, &wf, &p_rhs, None, false, &tol).unwrap();
        let un = u.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let vn = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        println!("|u|_inf={un:.3e} |v|_inf={vn:.3e}");
        let pert = RankOnePencil::degenerate(ONE, beta, u, v).unwrap();
        let sum = pert.add_to(&p);
        dump_regularity(&sum, &tol);
    }
    println!("total place() failures: {failures}/200");
}

#[test]
fn probe_a2_towers() {
    let tol = Tol::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
    let mut dumped = 0;
    let mut failures = 0;
    for i in 0..500 {
        let (a, p1) = gen::regular_pair(&mut rng, 2 + i % 5);
        let report = bounds::check_all_bounds(&a, &p1, &tol);
        let err = match report {
            Ok(_) => continue,
            Err(e) => e,
        };
        failures += 1;
        let msg = format!("{err:?}");
        if dumped >= 3 {
            continue;
        }
        dumped += 1;
        let short: String = msg.chars().take(160).collect();
        println!("=== pair {i} (n={}): {short}", a.n());
        let sum = p1.add_to(&a);
        for (label, q) in [("base", &a), ("sum", &sum)] {
            match spectral::eig_structure(q, &tol) {
                Ok(sd) => {
                    let parts: Vec<String> = sd
                        .eigs
                        .iter()
                        .map(|e| format!("{}:{:?}", e.lambda, e.tower))
                        .collect();
                    println!("  {label}: ok  [{}] ctol={:.1e}", parts.join(", "), sd.cluster_tol_used);
                }
                Err(e) => {
                    println!("  {label}: ERR {e:?}");
                    // Drill: raw char-poly roots and towers at each cluster.
                    let cp = q.char_poly().unwrap();
                    println!("    char_poly fin_deg={} inf={}", cp.finite_degree, cp.inf_multiplicity());
                    for ct in [1e-7, 1e-5, 1e-3, 2e-2] {
                        match poly::roots_with_multiplicity(&cp.poly, ct) {
                            Ok(rm) => {
                                let mut line = String::new();
                                for (z, m) in rm.roots.iter() {
                                    let t = spectral::nullity_tower(
                                        q,
                                        ExtComplex::Finite(*z),
                                        (*m).min(q.n()).max(1),
                                        tol.rank,
                                    )
                                    .unwrap();
                                    line.push_str(&format!(
                                        " ({:+.4e},{:+.4e})x{} tower {:?};",
                                        z.re, z.im, m, t
                                    ));
                                }
                                println!("    ctol={ct:.0e}:{line}");
                            }
                            Err(e2) => println!("    ctol={ct:.0e}: roots ERR {e2:?}"),
                        }
                    }
                }
            }
        }
    }
    println!("total bounds failures: {failures}/500");
}
