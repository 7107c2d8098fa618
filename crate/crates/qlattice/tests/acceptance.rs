mod common;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qlattice::completeness::{
    build_system, diffunc_residual, gram_matrix, lemma1_identity_residual, ls_residual,
    orthogonal_system, Example,
};
use qlattice::qcore::{euler_identity_residual, GridFunction, GridWindow, QParams};
use qlattice::qhankel::{
    hankel_q, pw_membership, roundtrip_error, sonine_pair, sonine_window, vanishing_demo,
};
use qlattice::series::{
    check_generating_function, check_j3_bound, coeffs_for, estimate_order_ln, BesselFamily,
    BesselSpec, EvenEntireSeries,
};
use qlattice::special::{ln_gamma, RealFunction};
use qlattice::uncertainty::UncertaintyContext;
use qlattice::zeros::{check_interlacing, zeros_of};

type Outcome = (bool, String);

fn params(q: f64) -> QParams<f64> {
    QParams::with_q(q).unwrap()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    match limit {
        Some(l) => (
            ok && elapsed < l,
            format!("{detail}; {:.2?} (limit {:?})", elapsed, l),
        ),
        None => (ok, detail),
    }
}

fn euler_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for q in [0.3, 0.5, 0.8] {
        for x in [-2.0, -0.5, 0.5, 2.0, 5.0] {
            worst = worst.max(euler_identity_residual(x, &params(q), 40).unwrap());
            let series: f64 = (0..40)
                .map(|n| {
                    (-1f64).powi(n) * q.powf((n * (n - 1)) as f64 / 2.0) * x.powi(n)
                        / common::poch(q, q, n as usize)
                })
                .sum();
            oracle_gap = oracle_gap.max(
                (common::poch_inf(x, q) - series).abs() / common::poch_inf(x, q).abs().max(1.0),
            );
        }
    }
    (
        worst < 1e-12,
        format!("max residual {worst:.2e}, direct product vs series {oracle_gap:.2e}"),
    )
}

fn euler_zeros() -> Outcome {
    let spec = BesselSpec::new(BesselFamily::EulerProduct, 0.0, 0.25).unwrap();
    let z = zeros_of(&spec, 4, &params(0.25)).unwrap();
    let err = z
        .values
        .iter()
        .zip([1.0, 2.0, 4.0, 8.0])
        .map(|(v, e)| ((v - e) / e).abs())
        .fold(0.0, f64::max);
    (
        z.len() == 4 && err < 1e-10,
        format!("zeros {:?}, max rel error {err:.2e}", z.values),
    )
}

fn orthogonality() -> Outcome {
    let p = params(0.5);
    let mut worst: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for nu in [0.0, 0.5, 1.0] {
        let s = orthogonal_system(nu, 6, &p).unwrap();
        let g = gram_matrix(&s, 6, &p).unwrap();
        let dmax = (0..6).map(|i| g[(i, i)]).fold(0.0, f64::max);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    worst = worst.max(g[(i, j)].abs() / dmax);
                }
            }
        }
        let (l0, l1) = (s.multipliers.values[0], s.multipliers.values[1]);
        let direct: f64 = (0..200)
            .map(|i| {
                let x = 0.5f64.powi(i);
                0.5 * x * x * common::j3(nu, l0 * x, 0.25) * common::j3(nu, l1 * x, 0.25)
            })
            .sum();
        oracle = oracle.max((direct - g[(0, 1)]).abs() / dmax);
    }
    (
        worst < 1e-8 && oracle < 1e-10,
        format!("max |G_ij|/max G_ii = {worst:.2e}, direct-sum gap {oracle:.2e}"),
    )
}

fn generating_function() -> Outcome {
    let p = params(0.5);
    let mut worst: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for x in [0.1, 0.2, 0.3] {
        for t in [-0.5, 0.25, 0.5] {
            worst = worst.max(check_generating_function(x, t, 12, &p).unwrap());
            let lhs = common::poch_inf(0.5 * x / t, 0.5) / common::poch_inf(x * t, 0.5);
            let rhs: f64 = (-12i32..=12)
                .map(|n| {
                    let j = if n >= 0 {
                        common::j3(n as f64, x, 0.5)
                    } else {
                        (-1f64).powi(-n)
                            * 0.5f64.powf(-n as f64 / 2.0)
                            * common::j3(-n as f64, x * 0.5f64.powf(-n as f64 / 2.0), 0.5)
                    };
                    j * t.powi(n)
                })
                .sum();
            oracle = oracle.max((lhs - rhs).abs());
        }
    }
    (
        worst < 1e-10,
        format!("max residual {worst:.2e}, direct-series residual {oracle:.2e}"),
    )
}

fn j3_bound() -> Outcome {
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    let mut oracle_ok = true;
    for nu in [0.0, 0.5, 1.0] {
        for q in [0.3, 0.5] {
            let c = common::poch_inf(q, q * q).powi(2);
            for k in -10..=10 {
                let r = check_j3_bound(nu, q, k, &params(q)).unwrap();
                ok &= r.holds;
                worst_ratio = worst_ratio.max(r.abs_j / r.bound);
                let direct = common::j3_lattice(nu, 2 * k, q).abs();
                oracle_ok &= direct <= q.powi(k).powf(nu) / c;
            }
        }
    }
    (
        ok && oracle_ok,
        format!("max |J|/bound = {worst_ratio:.4}, direct evaluation agrees: {oracle_ok}"),
    )
}

fn order_estimation() -> Outcome {
    let classical: f64 = coeffs_for(&BesselSpec::new(BesselFamily::Classical, 0.0, 0.5).unwrap())
        .unwrap()
        .estimate_order(200)
        .unwrap();
    let euler = EvenEntireSeries::euler(0.5, 1.0)
        .unwrap()
        .estimate_order(200)
        .unwrap();
    let ln_inv: Vec<f64> = (0..=200).map(|n| -ln_gamma(n as f64 + 1.0)).collect();
    let inv = estimate_order_ln(&ln_inv, 200).unwrap();
    let ok = (classical - 1.0).abs() < 0.15 && euler < 0.1 && (inv - 1.0).abs() < 0.1;
    (
        ok,
        format!("classical {classical:.4}, euler product {euler:.4}, 1/n! {inv:.4}"),
    )
}

fn interlacing() -> Outcome {
    let p = params(0.5);
    let a = zeros_of(
        &BesselSpec::new(BesselFamily::Classical, 0.5, 0.5).unwrap(),
        10,
        &p,
    )
    .unwrap();
    let b = zeros_of(
        &BesselSpec::new(BesselFamily::Classical, 1.5, 0.5).unwrap(),
        10,
        &p,
    )
    .unwrap();
    let strict = a.values.iter().zip(&b.values).all(|(x, y)| x < y);
    let err = a
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| (v - (n as f64 + 1.0) * std::f64::consts::PI).abs())
        .fold(0.0, f64::max);
    (
        strict && check_interlacing(&a, &b) && err < 1e-9,
        format!("interlaced {strict}, max |j_n - n pi| = {err:.2e}"),
    )
}

fn round_trip() -> Outcome {
    let p = params(0.5);
    let f_win = GridWindow::new(-3, 8).unwrap();
    let work = GridWindow::new(-10, 25).unwrap();
    let mut worst: f64 = 0.0;
    for k in f_win.exponents() {
        let f = GridFunction::spike(0.5, f_win, k).unwrap();
        worst = worst.max(roundtrip_error(&f, 0.5, work, &p).unwrap());
    }
    let inner: Vec<f64> = work
        .exponents()
        .map(|j| 0.25 * common::kernel(0.5, 0.5, j + 2))
        .collect();
    let direct: f64 = work
        .exponents()
        .zip(&inner)
        .map(|(j, g)| 0.5f64.powi(j) * common::kernel(0.5, 0.5, j + 2) * g)
        .sum();
    let oracle = (direct - 1.0).abs();
    (
        worst < 1e-6 && oracle < 1e-6,
        format!("max error {worst:.2e}, direct double sum at k=2 off by {oracle:.2e}"),
    )
}

fn sonine() -> Outcome {
    let p = params(0.5);
    let pair = sonine_pair(0.5, 1.5, &p).unwrap();
    let f = pair.f.sample(sonine_window()).unwrap();
    let g = hankel_q(&f, 0.5, GridWindow::new(-10, 6).unwrap(), &p).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let t = 0.5f64.powi(k);
        let s = 0.25f64;
        let u = t.powf(1.0) * common::poch_inf(s, 0.25) * common::poch_inf(t * t * 0.25, 0.25)
            / (common::poch_inf(0.25, 0.25) * common::poch_inf(t * t * s, 0.25));
        assert!((pair.u.eval(t).unwrap() - u).abs() < 1e-14);
        worst = worst.max(((g.get(k) - u) / u).abs());
    }
    let pw = pw_membership(&f, 0.5, 8, &p).unwrap();
    let rel = pw.max_abs / f.norm();
    (
        worst < 1e-6 && rel < 1e-6,
        format!("max rel error at t = q, q^2, q^3 {worst:.2e}; pw max_abs/norm {rel:.2e}"),
    )
}

fn vanishing() -> Outcome {
    let p = params(0.5);
    let win = GridWindow::new(-12, 25).unwrap();
    let w: Vec<f64> = [4usize, 8, 12]
        .iter()
        .map(|&n| {
            vanishing_demo(0.5, n, win, &p)
                .unwrap()
                .witness_norm_positive_part
        })
        .collect();
    let over = vanishing_demo(0.5, 30, win, &p)
        .unwrap()
        .witness_norm_positive_part;
    let decreasing = w.windows(2).all(|p| p[1] < p[0]);
    (decreasing && over < 1e-6, format!("witness N=4,8,12: {:?}; strictly decreasing {decreasing}; overdetermined N=30: {over:.2e}", w))
}

fn parts_identity() -> Outcome {
    let p = params(0.5);
    let y = GridFunction::from_fn(0.5, GridWindow::new(0, 12).unwrap(), |_, x| x).unwrap();
    let r = lemma1_identity_residual(0.5, 1.0, &y, &p).unwrap();
    let q: f64 = 0.5;
    let big_y = |i: i32| (1.0 - q) * (i..=12).map(|n| q.powi(2 * n)).sum::<f64>();
    let lhs: f64 = (1.0 - q)
        * (0..=12)
            .map(|i| {
                q.powi(i) * q.powi(i) * q.powi(i).powf(-0.5) * common::j2(0.5, q.powi(i + 1), 0.25)
            })
            .sum::<f64>();
    let tail: f64 = (1.0 - q)
        * (0..=12)
            .map(|i| {
                q.powi(i) * big_y(i) * q.powi(i).powf(-0.5) * common::j2(1.5, q.powi(i + 1), 0.25)
            })
            .sum::<f64>();
    let rhs = q.sqrt() * (big_y(0) * common::j2(0.5, 1.0, 0.25) + q.powf(1.5) / (1.0 - q) * tail);
    let oracle = (lhs - rhs).abs();
    let mut d_worst: f64 = 0.0;
    for k in 0..6 {
        d_worst = d_worst.max(diffunc_residual(0.5, 1.0, k, &p).unwrap().residual);
    }
    (r.residual < 1e-8 && oracle < 1e-8 && d_worst < 1e-10, format!("identity residual {:.2e} (direct {oracle:.2e}), difference rule residual {d_worst:.2e}", r.residual))
}

fn uncertainty_sweep() -> Outcome {
    let p = params(0.5);
    let sonine = sonine_pair(0.5, 1.5, &p)
        .unwrap()
        .f
        .sample(sonine_window())
        .unwrap()
        .normalized()
        .unwrap();
    let mut ctx = UncertaintyContext::new(&sonine, 0.5, &p).unwrap();
    let reports = ctx.sweep(-5, 5).unwrap();
    let non_vacuous: Vec<_> = reports.iter().filter(|r| !r.vacuous).collect();
    let all_satisfied = non_vacuous.iter().all(|r| r.satisfied);
    let printed = non_vacuous
        .iter()
        .filter(|r| r.printed_direction_holds)
        .count();
    let mut corpus = vec![sonine];
    let win = GridWindow::new(-6, 10).unwrap();
    for k in [-4, 0, 3, 7] {
        corpus.push(
            GridFunction::spike(0.5, win, k)
                .unwrap()
                .normalized()
                .unwrap(),
        );
    }
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..3 {
        corpus.push(
            GridFunction::from_fn(0.5, win, |_, _| rng.gen_range(-1.0..1.0))
                .unwrap()
                .normalized()
                .unwrap(),
        );
    }
    let mut slack = f64::INFINITY;
    for f in &corpus {
        let mut c = UncertaintyContext::new(f, 0.5, &p).unwrap();
        for r in c.sweep(-5, 5).unwrap().iter().filter(|r| !r.vacuous) {
            slack = slack.min(r.de_jeu_slack);
        }
    }
    (
        all_satisfied && slack >= -1e-6,
        format!(
            "{} non-vacuous points, all satisfied {all_satisfied} ({printed} satisfy the reversed inequality); min de Jeu slack over {} functions {slack:.2e}",
            non_vacuous.len(),
            corpus.len()
        ),
    )
}

fn completeness() -> Outcome {
    let p = params(0.5);
    let mut ok = true;
    let mut detail = Vec::new();
    for (ex, nu, alpha) in [
        (Example::Ex1, 0.0, 0.0),
        (Example::Ex2b, 0.5, 0.0),
        (Example::Ex4, 1.5, 0.5),
    ] {
        let s = build_system(ex, nu, alpha, 16, &p).unwrap();
        for (name, t) in [("1", (|_| 1.0) as fn(f64) -> f64), ("x", |x| x)] {
            let r: Vec<f64> = [4, 8, 12, 16]
                .iter()
                .map(|&n| ls_residual(&t, &s, n, &p).unwrap().residual)
                .collect();
            let mono = r.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
            ok &= mono;
            detail.push(format!("{ex:?}/{name}: {:.1e}", r[3]));
        }
    }
    let s = build_system(Example::Ex4, 1.5, 0.5, 1, &p).unwrap();
    let direct = s.generator.eval(s.multipliers.values[0] * 0.3).unwrap();
    ok &= (direct - j_three_halves(std::f64::consts::PI * 0.3)).abs() < 1e-12;
    (
        ok,
        format!(
            "non-increasing in N; residuals at N=16 {}",
            detail.join(", ")
        ),
    )
}

fn j_three_halves(z: f64) -> f64 {
    (2.0 / (std::f64::consts::PI * z)).sqrt() * (z.sin() / z - z.cos())
}

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        (
            "euler identity",
            Some(Duration::from_secs(1)),
            euler_identity,
        ),
        (
            "zeros of the Euler product",
            Some(Duration::from_secs(1)),
            euler_zeros,
        ),
        (
            "orthogonality of the zero system",
            Some(Duration::from_secs(30)),
            orthogonality,
        ),
        ("generating function", None, generating_function),
        ("third-function bound", None, j3_bound),
        ("order estimation", None, order_estimation),
        ("interlacing and half-integer zeros", None, interlacing),
        ("q-Hankel round trip", None, round_trip),
        ("Sonine pair and band limit", None, sonine),
        ("vanishing finite section", None, vanishing),
        ("integration by parts identity", None, parts_identity),
        ("uncertainty sweep", Some(Duration::from_secs(60)), uncertainty_sweep),
        ("completeness diagnostics", None, completeness),
    ];
    let mut passed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let (ok, detail) = timed(*limit, f);
        passed += ok as usize;
        println!(
            "{} {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!("{passed}/{} criteria passed", criteria.len());
}
