use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Expected rank of the highest-ranked of `n_targets` vertices drawn
/// uniformly from `n_vertices`: `Σ_{i=t}^{n} i·C(i-1, t-1) / C(n, t)`.
///
/// The sum is exact; only the final division is rounded.
pub fn expected_possible_ancestors(n_vertices: u64, n_targets: u64) -> f64 {
    assert!(
        (1..=n_vertices).contains(&n_targets),
        "need 1 <= targets <= vertices"
    );
    let num: BigUint = (n_targets..=n_vertices)
        .map(|i| BigUint::from(i) * binomial(i - 1, n_targets - 1))
        .sum();
    let den = binomial(n_vertices, n_targets);
    let whole = (&num / &den).to_f64().expect("finite quotient");
    let scale = BigUint::from(1u64 << 52);
    let frac = ((&num % &den) * &scale / &den).to_f64().expect("bounded") / (1u64 << 52) as f64;
    whole + frac
}
