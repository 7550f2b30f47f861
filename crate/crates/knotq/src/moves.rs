//! Braid-word moves preserving the closure's knot type, and the seeded
//! presentation fuzzer.
//!
//! Conjugation and (de)stabilization are the Markov moves; relation rewrites
//! and free cancellation stay inside the braid group. Randomness comes from a
//! documented splitmix64 generator so every failing sequence replays from its
//! seed.

use crate::braid::BraidWord;
use crate::burau::burau_determinant;
use crate::error::{Error, Result};
use crate::invariant::{full_report_braid, InvariantReport, PipelineOptions};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

pub const DEFAULT_WORD_CAP: usize = 60;
pub const DEFAULT_STRAND_CAP: usize = 16;

/// Mirror image: every letter negated.
pub fn mirror(b: &BraidWord) -> BraidWord {
    BraidWord {
        strands: b.strands,
        letters: b.letters.iter().map(|l| -l).collect(),
    }
}

/// Reverse word: the closure of the reversed knot.
pub fn reverse(b: &BraidWord) -> BraidWord {
    BraidWord {
        strands: b.strands,
        letters: b.letters.iter().rev().copied().collect(),
    }
}

/// sigma_i b sigma_i^{-1} as a word (length + 2).
pub fn conjugate(b: &BraidWord, i: i32) -> Result<BraidWord> {
    if i == 0 || i.unsigned_abs() as usize >= b.strands {
        return Err(Error::InvalidBraid(format!(
            "cannot conjugate by sigma_{i} on {} strands",
            b.strands
        )));
    }
    let mut letters = Vec::with_capacity(b.letters.len() + 2);
    letters.push(i);
    letters.extend_from_slice(&b.letters);
    letters.push(-i);
    Ok(BraidWord {
        strands: b.strands,
        letters,
    })
}

/// Markov stabilization: appends sigma_strands^sign on strands + 1.
pub fn stabilize(b: &BraidWord, sign: i8) -> BraidWord {
    let mut letters = b.letters.clone();
    letters.push(b.strands as i32 * sign.signum() as i32);
    BraidWord {
        strands: b.strands + 1,
        letters,
    }
}

/// Markov destabilization: legal when the top generator occurs exactly once,
/// as the final letter.
pub fn destabilize(b: &BraidWord) -> Option<BraidWord> {
    if b.strands < 2 {
        return None;
    }
    let top = (b.strands - 1) as i32;
    let occurrences = b
        .letters
        .iter()
        .filter(|l| l.unsigned_abs() as usize == top as usize)
        .count();
    if occurrences != 1 || b.letters.last().map(|l| l.unsigned_abs()) != Some(top as u32) {
        return None;
    }
    let mut letters = b.letters.clone();
    letters.pop();
    Some(BraidWord {
        strands: b.strands - 1,
        letters,
    })
}

/// Far commutation at `pos`: swap adjacent letters with |i - j| >= 2.
pub fn commute(b: &BraidWord, pos: usize) -> Option<BraidWord> {
    if pos + 1 >= b.letters.len() {
        return None;
    }
    let (x, y) = (b.letters[pos], b.letters[pos + 1]);
    if (x.unsigned_abs() as i64 - y.unsigned_abs() as i64).abs() < 2 {
        return None;
    }
    let mut letters = b.letters.clone();
    letters.swap(pos, pos + 1);
    Some(BraidWord {
        strands: b.strands,
        letters,
    })
}

/// Braid relation rewrite at `pos`: i, i+1, i -> i+1, i, i+1 (same sign on
/// all three letters) and the converse.
pub fn yang_baxter(b: &BraidWord, pos: usize) -> Option<BraidWord> {
    if pos + 2 >= b.letters.len() {
        return None;
    }
    let (x, y, z) = (b.letters[pos], b.letters[pos + 1], b.letters[pos + 2]);
    let s = x.signum();
    if y.signum() != s || z.signum() != s || x != z {
        return None;
    }
    let (i, j) = (x.abs(), y.abs());
    let rewritten = if j == i + 1 || j + 1 == i {
        (y, x, y)
    } else {
        return None;
    };
    let mut letters = b.letters.clone();
    letters[pos] = rewritten.0;
    letters[pos + 1] = rewritten.1;
    letters[pos + 2] = rewritten.2;
    Some(BraidWord {
        strands: b.strands,
        letters,
    })
}

/// Removes an adjacent sigma sigma^{-1} pair at `pos`.
pub fn free_cancel(b: &BraidWord, pos: usize) -> Option<BraidWord> {
    if pos + 1 >= b.letters.len() || b.letters[pos] != -b.letters[pos + 1] {
        return None;
    }
    let mut letters = b.letters.clone();
    letters.drain(pos..pos + 2);
    Some(BraidWord {
        strands: b.strands,
        letters,
    })
}

/// One move of a replayable sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Conjugate(i32),
    Stabilize(i8),
    Destabilize,
    Commute(usize),
    YangBaxter(usize),
    FreeCancel(usize),
}

pub fn apply_move(b: &BraidWord, m: Move) -> Option<BraidWord> {
    match m {
        Move::Conjugate(i) => conjugate(b, i).ok(),
        Move::Stabilize(sign) => Some(stabilize(b, sign)),
        Move::Destabilize => destabilize(b),
        Move::Commute(pos) => commute(b, pos),
        Move::YangBaxter(pos) => yang_baxter(b, pos),
        Move::FreeCancel(pos) => free_cancel(b, pos),
    }
}

/// Replayable random move sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub seed: u64,
    pub ops: Vec<Move>,
}

#[derive(Clone, Debug)]
pub struct MoveCaps {
    pub word_cap: usize,
    pub strand_cap: usize,
}

impl Default for MoveCaps {
    fn default() -> Self {
        MoveCaps {
            word_cap: DEFAULT_WORD_CAP,
            strand_cap: DEFAULT_STRAND_CAP,
        }
    }
}

/// Draws a random legal move sequence of length up to `n_moves` (shorter only
/// when no legal move remains) and returns the end word with the sequence.
pub fn random_move_sequence(
    b: &BraidWord,
    n_moves: usize,
    seed: u64,
    caps: &MoveCaps,
) -> (BraidWord, MoveSequence) {
    let mut rng = SplitMix64::new(seed);
    let mut word = b.clone();
    let mut ops = Vec::with_capacity(n_moves);
    'moves: for _ in 0..n_moves {
        for _attempt in 0..64 {
            let candidate = draw_move(&mut rng, &word, caps);
            if let Some(m) = candidate {
                if let Some(next) = apply_move(&word, m) {
                    word = next;
                    ops.push(m);
                    continue 'moves;
                }
            }
        }
        break;
    }
    (word, MoveSequence { seed, ops })
}

fn draw_move(rng: &mut SplitMix64, word: &BraidWord, caps: &MoveCaps) -> Option<Move> {
    let len = word.letters.len();
    match rng.below(6) {
        0 => {
            if len + 2 > caps.word_cap || word.strands < 2 {
                None
            } else {
                let i = rng.range_i64(1, (word.strands - 1) as i64) as i32;
                let sign = if rng.below(2) == 0 { 1 } else { -1 };
                Some(Move::Conjugate(i * sign))
            }
        }
        1 => {
            if len + 1 > caps.word_cap || word.strands + 1 > caps.strand_cap {
                None
            } else {
                Some(Move::Stabilize(if rng.below(2) == 0 { 1 } else { -1 }))
            }
        }
        2 => Some(Move::Destabilize),
        3 => (len > 0).then(|| Move::Commute(rng.below(len as u64) as usize)),
        4 => (len > 0).then(|| Move::YangBaxter(rng.below(len as u64) as usize)),
        _ => (len > 0).then(|| Move::FreeCancel(rng.below(len as u64) as usize)),
    }
}

/// Replays a recorded sequence.
pub fn replay(b: &BraidWord, seq: &MoveSequence) -> Result<BraidWord> {
    let mut word = b.clone();
    for (i, &m) in seq.ops.iter().enumerate() {
        word = apply_move(&word, m).ok_or_else(|| {
            Error::Internal(format!("move {i} of recorded sequence is illegal: {m:?}"))
        })?;
    }
    Ok(word)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzReport {
    pub knot: String,
    pub trials: usize,
    pub n_moves: usize,
    pub seed: u64,
    pub status: FuzzStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FuzzStatus {
    Pass,
    Fail {
        trial: usize,
        sequence: MoveSequence,
        expected: Box<InvariantReport>,
        got: Box<InvariantReport>,
    },
}

/// Runs `trials` replayable random move sequences of `n_moves` each and
/// checks that the full invariant report is identical for every presentation.
/// The Burau determinant is also checked per trial as a cheap independent
/// pre-invariant.
pub fn fuzz(
    b: &BraidWord,
    n_moves: usize,
    trials: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<FuzzReport> {
    let caps = MoveCaps::default();
    if b.letters.len() > caps.word_cap {
        return Err(Error::WordCapExceeded(caps.word_cap));
    }
    let base_report = full_report_braid(b, opts)?;
    let base_det = burau_determinant(b)?;

    for trial in 0..trials {
        let trial_seed = seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(trial as u64);
        let (word, seq) = random_move_sequence(b, n_moves, trial_seed, &caps);

        let det = burau_determinant(&word)?;
        if det != base_det {
            return Err(Error::Internal(format!(
                "Markov move broke the determinant: {det} != {base_det} after {seq:?}"
            )));
        }
        let report = full_report_braid(&word, opts)?;
        if !report.equivalent(&base_report) {
            return Ok(FuzzReport {
                knot: b.to_string(),
                trials,
                n_moves,
                seed,
                status: FuzzStatus::Fail {
                    trial,
                    sequence: seq,
                    expected: Box::new(base_report),
                    got: Box::new(report),
                },
            });
        }
    }
    Ok(FuzzReport {
        knot: b.to_string(),
        trials,
        n_moves,
        seed,
        status: FuzzStatus::Pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(strands: usize, letters: Vec<i32>) -> BraidWord {
        BraidWord::new(strands, letters).unwrap()
    }

    #[test]
    fn mirror_is_involutive() {
        let b = word(3, vec![1, -2, 1, -2]);
        assert_eq!(mirror(&mirror(&b)), b);
        assert_eq!(mirror(&b).letters, vec![-1, 2, -1, 2]);
        assert_eq!(mirror(&word(1, vec![])).letters, Vec::<i32>::new());
    }

    #[test]
    fn conjugate_word_form() {
        let b = word(2, vec![1, 1, 1]);
        let c = conjugate(&b, 1).unwrap();
        assert_eq!(c.letters, vec![1, 1, 1, 1, -1]);
        // cancel the trailing pair to recover the original
        let cancelled = free_cancel(&c, 3).unwrap();
        assert_eq!(cancelled, b);
        assert!(conjugate(&b, 2).is_err());
    }

    #[test]
    fn stabilize_and_destabilize() {
        let b = word(2, vec![1, 1, 1]);
        let s = stabilize(&b, 1);
        assert_eq!(s.strands, 3);
        assert_eq!(s.letters, vec![1, 1, 1, 2]);
        assert_eq!(destabilize(&s).unwrap(), b);
        let s_neg = stabilize(&b, -1);
        assert_eq!(s_neg.letters, vec![1, 1, 1, -2]);
        // not legal when the top generator occurs twice
        let tangled = word(3, vec![2, 1, 2]);
        assert!(destabilize(&tangled).is_none());
    }

    #[test]
    fn relation_rewrites() {
        let b = word(3, vec![1, 2, 1]);
        let r = yang_baxter(&b, 0).unwrap();
        assert_eq!(r.letters, vec![2, 1, 2]);
        assert_eq!(yang_baxter(&r, 0).unwrap(), b);
        let neg = word(3, vec![-1, -2, -1]);
        assert_eq!(yang_baxter(&neg, 0).unwrap().letters, vec![-2, -1, -2]);
        assert!(yang_baxter(&word(3, vec![1, -2, 1]), 0).is_none());

        let c = word(4, vec![1, 3, 2]);
        assert_eq!(commute(&c, 0).unwrap().letters, vec![3, 1, 2]);
        assert!(commute(&c, 1).is_none());
    }

    #[test]
    fn move_sequences_replay() {
        let b = word(3, vec![1, -2, 1, -2]);
        let caps = MoveCaps::default();
        let (end, seq) = random_move_sequence(&b, 25, 42, &caps);
        let replayed = replay(&b, &seq).unwrap();
        assert_eq!(replayed, end);
        assert!(end.letters.len() <= caps.word_cap);
    }

    #[test]
    fn moves_preserve_determinant() {
        let b = word(3, vec![1, -2, 1, -2]);
        let d0 = burau_determinant(&b).unwrap();
        let caps = MoveCaps::default();
        for seed in 0..10 {
            let (end, _) = random_move_sequence(&b, 20, seed, &caps);
            assert_eq!(burau_determinant(&end).unwrap(), d0);
        }
    }

    #[test]
    fn fuzz_trefoil_small() {
        let b = word(2, vec![1, 1, 1]);
        let r = fuzz(&b, 12, 8, 7, &PipelineOptions::default()).unwrap();
        assert_eq!(r.status, FuzzStatus::Pass);
    }

    #[test]
    fn fuzz_unknot() {
        let b = word(1, vec![]);
        let r = fuzz(&b, 10, 5, 3, &PipelineOptions::default()).unwrap();
        assert_eq!(r.status, FuzzStatus::Pass);
    }

    #[test]
    fn stabilized_trefoil_invariant() {
        let b = word(2, vec![1, 1, 1]);
        let s = stabilize(&stabilize(&b, 1), -1);
        let opts = PipelineOptions::default();
        let r_base = full_report_braid(&b, &opts).unwrap();
        let r_stab = full_report_braid(&s, &opts).unwrap();
        assert!(r_base.equivalent(&r_stab));
        assert_eq!(r_stab.minv, Some(vec![-1]));
    }

    #[test]
    fn mirror_figure_eight_equivalent() {
        let b = word(3, vec![1, -2, 1, -2]);
        let opts = PipelineOptions::default();
        let r = full_report_braid(&b, &opts).unwrap();
        let rm = full_report_braid(&mirror(&b), &opts).unwrap();
        assert!(r.equivalent(&rm));
    }
}
