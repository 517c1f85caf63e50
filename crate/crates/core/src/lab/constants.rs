use std::f64::consts::PI;

/// Largest `n` for which the exact rational path of [`liu_constant`] is used.
const EXACT_LIMIT: usize = 40;

/// Volume of the unit ball in `R^n`, `pi^{n/2} / Gamma(n/2 + 1)`, via
/// `|B_n| = 2 pi |B_{n-2}| / n`.
pub fn ball_volume(n: usize) -> f64 {
    let (mut even, mut odd) = (1.0, 2.0);
    if n == 0 {
        return even;
    }
    for k in 2..=n {
        if k % 2 == 0 {
            even *= 2.0 * PI / k as f64;
        } else {
            odd *= 2.0 * PI / k as f64;
        }
    }
    if n.is_multiple_of(2) {
        even
    } else {
        odd
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `2 |B_{n-1}| / |B_n|`.
///
/// With `r_n = |B_{n-1}| / |B_n|` we have `r_1 = 1/2` and
/// `r_n r_{n-1} = n / (2 pi)`, so `r_n` is rational for odd `n` and a
/// rational multiple of `1/pi` for even `n`. The rational part is carried
/// exactly, which gives `liu_constant(3) == 1.5` and `liu_constant(2) == 4/pi`.
pub fn liu_constant(n: usize) -> f64 {
    assert!(n >= 1, "liu_constant needs n >= 1");
    if n > EXACT_LIMIT {
        return 2.0 * ball_volume(n - 1) / ball_volume(n);
    }
    // r_k = num/den * pi^{-(k+1) mod 2}
    let (mut num, mut den): (u128, u128) = (1, 2);
    for k in 2..=n {
        // r_k = k / (2 r_{k-1}) with the pi power flipping
        let (nn, dd) = (k as u128 * den, 2 * num);
        let g = gcd(nn, dd);
        num = nn / g;
        den = dd / g;
    }
    let rational = (2 * num) as f64 / den as f64;
    if n.is_multiple_of(2) {
        rational / PI
    } else {
        rational
    }
}

/// `8 / (3 sqrt 3)`, the sharp gradient constant for bounded harmonic
/// functions on the 3-ball.
pub fn liu_constant_n3() -> f64 {
    8.0 / (3.0 * 3f64.sqrt())
}

/// Constant `C` in `|grad f(x)| <= C / (1 - |x|^2)` for real harmonic
/// `f: B_n -> (-1, 1)`.
pub fn sharp_gradient_constant(n: usize) -> f64 {
    if n == 3 {
        liu_constant_n3()
    } else {
        liu_constant(n)
    }
}

/// `1 / (2^{1/dim} - 1)` for functions on the ball of dimension `dim`.
pub fn zhang_constant(dim: usize) -> f64 {
    1.0 / (2f64.powf(1.0 / dim as f64) - 1.0)
}
