#![allow(dead_code)]

pub fn poch_inf(a: f64, q: f64) -> f64 {
    let mut p = 1.0;
    let mut t = a;
    while t.abs() > 1e-18 {
        p *= 1.0 - t;
        t *= q;
    }
    p
}

pub fn poch(a: f64, q: f64, n: usize) -> f64 {
    (0..n).map(|k| 1.0 - a * q.powi(k as i32)).product()
}

/// `(b^s; b)_∞` for an integer exponent, exactly zero when `s ≤ 0`.
fn poch_pow(b: f64, s: i32) -> f64 {
    if s <= 0 {
        0.0
    } else {
        poch_inf(b.powi(s), b)
    }
}

/// Third Jackson function at the lattice point `x = b^{m/2}`.
pub fn j3_lattice(nu: f64, m: i32, b: f64) -> f64 {
    let x = b.sqrt().powi(m);
    let bb = poch_inf(b, b);
    let mut s = 0.0;
    if m >= 0 {
        let x2 = b.powi(m);
        for k in 0..200 {
            let e = nu + k as f64 + 1.0;
            let tail = if nu.fract() == 0.0 {
                poch_pow(b, e as i32)
            } else {
                poch_inf(b.powf(e), b)
            };
            let t = b.powf((k * (k + 1)) as f64 / 2.0) * x2.powi(k) * tail / poch(b, b, k as usize);
            s += if k % 2 == 0 { t } else { -t };
        }
    } else {
        for n in 0..200 {
            let nf = n as f64;
            let t = b.powf(nf * (nf - 1.0) / 2.0 + (nu + 1.0) * nf) / poch(b, b, n)
                * poch_pow(b, m + n as i32 + 1);
            s += if n % 2 == 0 { t } else { -t };
        }
    }
    x.powf(nu) * s / bb
}

/// Third Jackson function of order `nu` for `0 ≤ x ≤ 1`.
pub fn j3(nu: f64, x: f64, b: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..200 {
        let t = b.powf((k * (k + 1)) as f64 / 2.0)
            * x.powi(2 * k)
            * poch_inf(b.powf(nu + k as f64 + 1.0), b)
            / poch(b, b, k as usize);
        s += if k % 2 == 0 { t } else { -t };
    }
    x.powf(nu) * s / poch_inf(b, b)
}

/// Second Jackson function for moderate `x`.
pub fn j2(nu: f64, x: f64, b: f64) -> f64 {
    let c = poch_inf(b.powf(nu + 1.0), b) / poch_inf(b, b);
    let mut s = 0.0;
    for n in 0..120 {
        let nf = n as f64;
        let t = b.powf(nf * (nf + nu)) * x.powi(2 * n)
            / (poch(b.powf(nu + 1.0), b, n as usize) * poch(b, b, n as usize));
        s += if n % 2 == 0 { t } else { -t };
    }
    x.powf(nu) * c * s
}

/// `(xt)^{1/2} J_ν^{(3)}(xt; q²)` at `xt = q^m`.
pub fn kernel(nu: f64, q: f64, m: i32) -> f64 {
    q.powf(m as f64 / 2.0) * j3_lattice(nu, m, q * q)
}
