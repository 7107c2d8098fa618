use crate::scalar::{lit, Scalar};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Scalar>(z: T) -> T {
    let mut a: T = lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + lit::<T>(c) / (z + lit(i as f64));
    }
    a
}

/// Euler gamma function.
pub fn gamma<T: Scalar>(x: T) -> T {
    let half: T = lit(0.5);
    if x >= T::one() && x <= lit(30.0) && x == x.floor() {
        let mut f = T::one();
        let mut k = lit::<T>(2.0);
        while k < x {
            f = f * k;
            k = k + T::one();
        }
        return f;
    }
    if x < half {
        if x == x.floor() {
            return T::nan();
        }
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let t = z + lit(LANCZOS_G) + half;
    let p = (z + half) * half;
    let sqrt_2pi = (lit::<T>(2.0) * T::PI()).sqrt();
    sqrt_2pi * t.powf(p) * (-t).exp() * t.powf(p) * lanczos_sum(z)
}

/// `ln |Γ(x)|`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half: T = lit(0.5);
    if x >= T::one() && x <= lit(30.0) && x == x.floor() {
        return gamma(x).ln();
    }
    if x < half {
        return (T::PI() / (T::PI() * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + lit(LANCZOS_G) + half;
    half * (lit::<T>(2.0) * T::PI()).ln() + (z + half) * t.ln() - t + lanczos_sum(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..20 {
            f *= n as f64;
            assert!((gamma(n as f64 + 1.0) / f - 1.0).abs() < 1e-13, "n={n}");
            assert!((ln_gamma(n as f64 + 1.0) - f.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn half_integer_and_reflection() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5f64) - sqrt_pi).abs() < 1e-14);
        assert!((gamma(-0.5f64) + 2.0 * sqrt_pi).abs() < 1e-13);
        assert!(gamma(-2.0f64).is_nan());
    }

    #[test]
    fn large_argument_log() {
        let stirling = |x: f64| {
            (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        };
        assert!((ln_gamma(500.0f64) - stirling(500.0)).abs() < 1e-9);
        assert!(gamma(150.0f64).is_finite());
    }
}
