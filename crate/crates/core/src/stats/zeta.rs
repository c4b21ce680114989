//! Hurwitz zeta function for real `s > 1`, `q >= 1`, via Euler-Maclaurin
//! summation.

/// B_2k / (2k)! for k = 1..=9.
const BERNOULLI_OVER_FACTORIAL: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3_617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
];

const DIRECT_TERMS: usize = 12;

/// sum over k >= 0 of (q + k)^(-s).
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let mut sum = 0.0;
    let mut x = q;
    for _ in 0..DIRECT_TERMS {
        sum += x.powf(-s);
        x += 1.0;
    }
    // Tail from x = q + DIRECT_TERMS onward.
    let x_pow = x.powf(-s);
    sum += x * x_pow / (s - 1.0) + 0.5 * x_pow;
    // Rising factorial s (s+1) ... (s+2k-2) times x^(-s-2k+1).
    let mut rising = s;
    let mut term_pow = x_pow / x;
    let x2 = x * x;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let t = coeff * rising * term_pow;
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
        let k2 = 2.0 * (k as f64 + 1.0);
        rising *= (s + k2 - 1.0) * (s + k2);
        term_pow /= x2;
    }
    sum
}

/// sum for k in [lo, hi] of k^(-s); `hi = None` means unbounded (requires s > 1).
pub fn power_sum(s: f64, lo: u64, hi: Option<u64>) -> f64 {
    match hi {
        Some(hi) if hi < lo => 0.0,
        Some(hi) if hi - lo < 4_096 || s <= 1.0 => (lo..=hi).map(|k| (k as f64).powf(-s)).sum(),
        Some(hi) => hurwitz_zeta(s, lo as f64) - hurwitz_zeta(s, hi as f64 + 1.0),
        None => hurwitz_zeta(s, lo as f64),
    }
}
