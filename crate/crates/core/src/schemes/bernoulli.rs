use crate::scalar::Real;

/// Bernoulli function `B(z) = z / (e^z - 1)`, with `B(0) = 1`.
///
/// Small arguments use the Taylor series to dodge the cancellation in
/// `e^z - 1`; very negative arguments use the asymptote `-z`.
#[inline]
pub fn bernoulli<T: Real>(z: T) -> T {
    let za = z.abs();
    if za < T::lit(1e-5) {
        let z2 = z * z;
        T::one() - z / T::lit(2.0) + z2 / T::lit(12.0) - z2 * z2 / T::lit(720.0)
    } else if z < T::lit(-700.0) {
        -z
    } else {
        z / z.exp_m1()
    }
}

/// `(B(-z), B(z))`, the interface weights of an exponentially fitted flux.
#[inline]
pub fn bernoulli_pair<T: Real>(z: T) -> (T, T) {
    let b = bernoulli(z);
    // B(-z) = B(z) + z holds exactly in exact arithmetic; evaluating both keeps
    // the relative accuracy of the smaller weight when |z| is large.
    (bernoulli(-z), b)
}
