use super::{BitWord, RowVec};

/// `[l, m]_j`: entry `j` of the periodic pattern `0_l ⌢ 1_m`, computed as
/// `⌈(j + m)/(l + m)⌉ − ⌈j/(l + m)⌉`.
pub fn step(l: u64, m: u64, j: u64) -> u8 {
    let (l, m, j) = (u128::from(l), u128::from(m), u128::from(j));
    let period = l + m;
    ((j + m).div_ceil(period) - j.div_ceil(period)) as u8
}

/// First `len` entries of `1_∞ × (0_l ⌢ 1_m)`, built with the Kronecker
/// product instead of the ceiling formula.
pub fn step_prefix_kron(l: usize, m: usize, len: usize) -> BitWord {
    let period = l + m;
    let block = RowVec::<crate::algebra::Rational>::zeros(l).concat(&RowVec::ones(m));
    let copies = len.div_ceil(period.max(1));
    let full = RowVec::ones(copies).kron(&block);
    BitWord::new(full.iter().take(len).map(|e| if num_traits::Zero::is_zero(e) { 0 } else { 1 }).collect())
        .expect("0/1 entries")
}

/// `Σ_{k=0}^{n-1} [m^k (m−1), m^k]_j`, the base-2 logarithm of entry `j` of
/// `(1_{m−1} ⌢ ⟨2⟩)^{⟨n⟩}` for `j ≤ m^n`. Terms whose pattern cannot start
/// before `j` are skipped, so huge `m^k` never has to be formed.
pub fn kron_power_log(m: u64, n: u32, j: u64) -> u64 {
    let mut total = 0;
    let mut power: u128 = 1;
    for _ in 0..n {
        let first_one = power * u128::from(m - 1) + 1;
        if first_one > u128::from(j) {
            break;
        }
        total += u64::from(step((power * u128::from(m - 1)) as u64, power as u64, j));
        power *= u128::from(m);
    }
    total
}
