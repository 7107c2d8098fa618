use crate::scalar::Scalar;

/// `m · 2^e` with `m` kept in a safe range, for products whose partial values overflow.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scaled<T> {
    pub m: T,
    pub e: i32,
}

fn step<T: Scalar>() -> i32 {
    let (mant, exp, _) = T::max_value().integer_decode();
    let bits = 64 - mant.leading_zeros() as i32;
    (exp as i32 + bits - 1) / 4
}

fn pow2<T: Scalar>(e: i32) -> T {
    let two = T::one() + T::one();
    let h = e / 2;
    two.powi(h) * two.powi(e - h)
}

impl<T: Scalar> Scaled<T> {
    pub fn new(x: T) -> Self {
        Scaled { m: x, e: 0 }.normalized()
    }

    fn normalized(mut self) -> Self {
        let s = step::<T>();
        let big = pow2::<T>(s);
        let small = pow2::<T>(-s);
        if self.m == T::zero() || !self.m.is_finite() {
            return self;
        }
        while self.m.abs() > big {
            self.m = self.m * small;
            self.e += s;
        }
        while self.m.abs() < small {
            self.m = self.m * big;
            self.e -= s;
        }
        self
    }

    pub fn mul(self, x: T) -> Self {
        Scaled {
            m: self.m * x,
            e: self.e,
        }
        .normalized()
    }

    pub fn mul_scaled(self, o: Scaled<T>) -> Self {
        Scaled {
            m: self.m * o.m,
            e: self.e + o.e,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.m == T::zero()
    }

    pub fn value(self) -> T {
        if self.m == T::zero() {
            return T::zero();
        }
        self.m * pow2::<T>(self.e)
    }

    /// `2^t` for real `t`, split so that the integer part never overflows.
    pub fn exp2(t: T) -> Self {
        let f = t.floor();
        let e = f.to_i32().unwrap_or(if t > T::zero() {
            i32::MAX / 2
        } else {
            i32::MIN / 2
        });
        Scaled {
            m: (t - f).exp2(),
            e,
        }
        .normalized()
    }

    /// Sum of scaled values, aligned on the largest exponent.
    pub fn sum(items: &[Scaled<T>]) -> Self {
        let emax = items.iter().filter(|s| !s.is_zero()).map(|s| s.e).max();
        let Some(emax) = emax else {
            return Scaled::new(T::zero());
        };
        let m = items
            .iter()
            .filter(|s| !s.is_zero())
            .fold(T::zero(), |acc, s| acc + s.m * pow2::<T>(s.e - emax));
        Scaled { m, e: emax }.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_overflowing_intermediate() {
        let mut s = Scaled::new(1.0f64);
        for _ in 0..40 {
            s = s.mul(1e30);
        }
        for _ in 0..40 {
            s = s.mul(1e-30);
        }
        assert!((s.value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sum_aligns_exponents() {
        let a = Scaled::new(3.0f64).mul(1e300).mul(1e10);
        let b = Scaled::new(-1.0f64).mul(1e300).mul(1e10);
        let s = Scaled::sum(&[a, b]);
        let ratio = s.mul(1e-300).mul(1e-10).value();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exp2_matches_powf() {
        let s = Scaled::<f64>::exp2(-3.25);
        assert!((s.value() - 2f64.powf(-3.25)).abs() < 1e-16);
    }
}
