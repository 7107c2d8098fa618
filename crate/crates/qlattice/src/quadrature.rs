use crate::scalar::{from_u, lit, Scalar};

/// Gauss–Legendre nodes and weights of order `n` on `[-1, 1]`.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nt: T = from_u(n);
    let half = n.div_ceil(2);
    for i in 0..half {
        let guess = T::PI() * (from_u::<T>(i + 1) - lit(0.25)) / (nt + lit(0.5));
        let mut z = guess.cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z = z - dz;
            if dz.abs() <= T::epsilon() * lit(4.0) {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let wi = lit::<T>(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative<T: Scalar>(n: usize, z: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = z;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kt: T = from_u(k);
        let p2 = ((lit::<T>(2.0) * kt - T::one()) * z * p1 - (kt - T::one()) * p0) / kt;
        p0 = p1;
        p1 = p2;
    }
    let nt: T = from_u(n);
    (p1, nt * (z * p1 - p0) / (z * z - T::one()))
}

/// Gauss–Legendre rule mapped to `(0, 1)`.
pub fn gauss_legendre_unit<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(n);
    let half: T = lit(0.5);
    (
        x.into_iter().map(|xi| half * (xi + T::one())).collect(),
        w.into_iter().map(|wi| half * wi).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [4, 7, 32, 128] {
            let (_, w) = gauss_legendre_unit::<f64>(n);
            let s: f64 = w.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let n = 6;
        let (x, w) = gauss_legendre_unit::<f64>(n);
        for d in 0..2 * n {
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(d as i32))
                .sum();
            assert!((s - 1.0 / (d as f64 + 1.0)).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let (x, _) = gauss_legendre::<f64>(9);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(x[4].abs() < 1e-15);
        assert!((x[0] + x[8]).abs() < 1e-15);
    }
}
