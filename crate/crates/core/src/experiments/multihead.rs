use rand_core::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prng::below;

/// Symbols seen by a head; `End` is the blank after the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HSym {
    Zero,
    One,
    Hash,
    End,
}

impl HSym {
    const ALL: [HSym; 4] = [HSym::Zero, HSym::One, HSym::Hash, HSym::End];

    fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(HSym::Zero),
            '1' => Some(HSym::One),
            '#' => Some(HSym::Hash),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state {state}: the action moves no head")]
    NoProgress { state: usize },
    #[error("state {state}: target state {target} is out of range")]
    BadTarget { state: usize, target: usize },
}

/// One-way automaton with `k` heads. A missing transition leads to an
/// implicit dead state that rejects after the heads run off the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiheadAutomaton {
    pub k: usize,
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// Indexed by state and then by the symbol tuple read as a base-4
    /// number (head 0 least significant). Entry: next state and bit mask
    /// of heads to advance.
    table: Vec<Vec<Option<(usize, u32)>>>,
}

impl MultiheadAutomaton {
    /// Builds the full table from `f(state, symbols)`. Heads already at
    /// `End` are dropped from each mask. An action whose remaining mask is
    /// empty could never terminate, so it leads to the dead state.
    pub fn from_fn(
        k: usize,
        states: usize,
        initial: usize,
        accepting: Vec<bool>,
        f: impl Fn(usize, &[HSym]) -> Option<(usize, u32)>,
    ) -> Result<Self, AutomatonError> {
        assert!((1..=8).contains(&k) && accepting.len() == states && initial < states);
        let combos = 4usize.pow(k as u32);
        let mut table = vec![vec![None; combos]; states];
        let mut syms = vec![HSym::Zero; k];
        for (state, row) in table.iter_mut().enumerate() {
            for (code, cell) in row.iter_mut().enumerate() {
                for (h, s) in syms.iter_mut().enumerate() {
                    *s = HSym::ALL[code / 4usize.pow(h as u32) % 4];
                }
                if syms.iter().all(|&s| s == HSym::End) {
                    continue;
                }
                if let Some((target, mask)) = f(state, &syms) {
                    if target >= states {
                        return Err(AutomatonError::BadTarget { state, target });
                    }
                    let live = (0..k)
                        .filter(|&h| mask >> h & 1 == 1 && syms[h] != HSym::End)
                        .fold(0, |m, h| m | 1 << h);
                    if mask == 0 {
                        return Err(AutomatonError::NoProgress { state });
                    }
                    *cell = (live != 0).then_some((target, live));
                }
            }
        }
        Ok(MultiheadAutomaton { k, states, initial, accepting, table })
    }
}

/// Runs until every head has passed the end of the input.
pub fn simulate_multihead(a: &MultiheadAutomaton, input: &str) -> bool {
    let tape: Vec<HSym> = input
        .chars()
        .map(|c| HSym::from_char(c).expect("input must be over {0,1,#}"))
        .collect();
    let read = |p: usize| tape.get(p).copied().unwrap_or(HSym::End);
    let mut heads = vec![0usize; a.k];
    let mut state = Some(a.initial);
    while heads.iter().any(|&p| p < tape.len()) {
        let Some(s) = state else {
            // Dead: run every head off the input.
            return false;
        };
        let code = heads
            .iter()
            .rev()
            .fold(0, |acc, &p| acc * 4 + read(p).index());
        match a.table[s][code] {
            Some((next, mask)) => {
                for (h, p) in heads.iter_mut().enumerate() {
                    if mask >> h & 1 == 1 {
                        *p += 1;
                    }
                }
                state = Some(next);
            }
            None => state = None,
        }
    }
    state.is_some_and(|s| a.accepting[s])
}

fn is_bit(s: HSym) -> bool {
    matches!(s, HSym::Zero | HSym::One)
}

const ALL_HEADS: u32 = u32::MAX;

/// Two heads recognizing `x#x` with `x` binary. Head 1 first runs past the
/// `#`, then both heads compare in lockstep.
pub fn copy_recognizer() -> MultiheadAutomaton {
    const SKIP: usize = 0;
    const CMP: usize = 1;
    const ACC: usize = 2;
    MultiheadAutomaton::from_fn(2, 3, SKIP, vec![false, false, true], |s, r| match (s, r[0], r[1]) {
        (SKIP, _, b) if is_bit(b) => Some((SKIP, 0b10)),
        (SKIP, _, HSym::Hash) => Some((CMP, 0b10)),
        (CMP, a, b) if is_bit(a) && a == b => Some((CMP, 0b11)),
        (CMP, HSym::Hash, HSym::End) => Some((ACC, ALL_HEADS)),
        (ACC, ..) => Some((ACC, ALL_HEADS)),
        _ => None,
    })
    .expect("well-formed")
}

/// Three heads recognizing `x#y#z#z#y#x` with binary blocks.
///
/// Head 2 moves to the start of block 4 and head 3 to block 3 (head 2
/// counting three `#`, head 3 two), then z is compared. Next head 3 moves
/// on to block 5 and head 2 to block 6. Finally head 1 checks block 1
/// against head 2 and block 2 against head 3.
pub fn mirror_recognizer() -> MultiheadAutomaton {
    const H2_0: usize = 0; // head 2 has passed no '#'
    const H2_1: usize = 1;
    const H2_2: usize = 2;
    const H3_0: usize = 3; // head 2 in block 4, head 3 has passed no '#'
    const H3_1: usize = 4;
    const CMP_Z: usize = 5; // heads 2, 3 at blocks 4, 3
    const MOVE_3: usize = 6; // head 3 at the '#' after block 3, heading to block 5
    const MOVE_3B: usize = 7; // head 3 inside block 4
    const MOVE_2: usize = 8; // heads 2 and 3 at the start of block 5
    const MOVE_2B: usize = 9; // head 2 inside block 5
    const CMP_X: usize = 10; // head 1 in block 1, head 2 in block 6
    const CMP_Y: usize = 11; // head 1 in block 2, head 3 in block 5
    const ACC: usize = 12;
    let mut accepting = vec![false; 13];
    accepting[ACC] = true;
    MultiheadAutomaton::from_fn(3, 13, H2_0, accepting, |s, r| {
        let (a, b, c) = (r[0], r[1], r[2]);
        match s {
            H2_0 | H2_1 | H2_2 if is_bit(b) => Some((s, 0b010)),
            H2_0 | H2_1 if b == HSym::Hash => Some((s + 1, 0b010)),
            H2_2 if b == HSym::Hash => Some((H3_0, 0b010)),
            H3_0 | H3_1 if is_bit(c) => Some((s, 0b100)),
            H3_0 if c == HSym::Hash => Some((H3_1, 0b100)),
            H3_1 if c == HSym::Hash => Some((CMP_Z, 0b100)),
            CMP_Z if is_bit(b) && b == c => Some((CMP_Z, 0b110)),
            CMP_Z if b == HSym::Hash && c == HSym::Hash => Some((MOVE_3, 0b100)),
            MOVE_3 | MOVE_3B if is_bit(c) => Some((MOVE_3B, 0b100)),
            MOVE_3 | MOVE_3B if c == HSym::Hash => Some((MOVE_2, 0b110)),
            MOVE_2 | MOVE_2B if is_bit(b) => Some((MOVE_2B, 0b010)),
            MOVE_2 | MOVE_2B if b == HSym::Hash => Some((CMP_X, 0b010)),
            CMP_X if is_bit(a) && a == b => Some((CMP_X, 0b011)),
            CMP_X if a == HSym::Hash && b == HSym::End => Some((CMP_Y, 0b001)),
            CMP_Y if is_bit(a) && a == c => Some((CMP_Y, 0b101)),
            CMP_Y if a == HSym::Hash && c == HSym::Hash => Some((ACC, ALL_HEADS)),
            ACC => Some((ACC, ALL_HEADS)),
            _ => None,
        }
    })
    .expect("well-formed")
}

/// Direct check of the `x#x` pattern.
pub fn copy_pattern(s: &str) -> bool {
    let parts: Vec<&str> = s.split('#').collect();
    parts.len() == 2 && parts[0] == parts[1]
}

/// Direct check of the `x#y#z#z#y#x` pattern.
pub fn mirror_pattern(s: &str) -> bool {
    let p: Vec<&str> = s.split('#').collect();
    p.len() == 6
        && p.iter().all(|b| b.chars().all(|c| c == '0' || c == '1'))
        && p[0] == p[5]
        && p[1] == p[4]
        && p[2] == p[3]
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> String {
    (0..n).map(|_| if below(rng, 2) == 1 { '1' } else { '0' }).collect()
}

/// Replaces, inserts or deletes one character.
pub fn perturb(rng: &mut impl Rng, s: &str) -> String {
    const ALPHABET: [char; 3] = ['0', '1', '#'];
    let mut v: Vec<char> = s.chars().collect();
    let i = below(rng, v.len() as u64 + 1) as usize;
    match below(rng, 3) {
        0 if i < v.len() => {
            let at = ALPHABET.iter().position(|&c| c == v[i]).expect("alphabet");
            v[i] = ALPHABET[(at + 1 + below(rng, 2) as usize) % 3];
        }
        1 => v.insert(i, ALPHABET[below(rng, 3) as usize]),
        _ if i < v.len() => {
            v.remove(i);
        }
        _ => v.push('#'),
    }
    v.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::splitmix;

    #[test]
    fn copy_examples() {
        let a = copy_recognizer();
        assert!(simulate_multihead(&a, "01#01"));
        assert!(!simulate_multihead(&a, "01#10"));
        assert!(simulate_multihead(&a, "#"));
        assert!(!simulate_multihead(&a, ""));
        assert!(!simulate_multihead(&a, "01#01#"));
        assert!(!simulate_multihead(&a, "01#011"));
    }

    #[test]
    fn copy_exhaustive_small() {
        let a = copy_recognizer();
        let alphabet = ['0', '1', '#'];
        for n in 0..=7u32 {
            for v in 0..3u32.pow(n) {
                let s: String = (0..n).map(|i| alphabet[(v / 3u32.pow(i) % 3) as usize]).collect();
                assert_eq!(simulate_multihead(&a, &s), copy_pattern(&s), "{s}");
            }
        }
    }

    #[test]
    fn mirror_exhaustive_small() {
        let a = mirror_recognizer();
        let alphabet = ['0', '1', '#'];
        for n in 0..=10u32 {
            for v in 0..3u32.pow(n) {
                let s: String = (0..n).map(|i| alphabet[(v / 3u32.pow(i) % 3) as usize]).collect();
                assert_eq!(simulate_multihead(&a, &s), mirror_pattern(&s), "{s}");
            }
        }
    }

    #[test]
    fn random_cases_match_oracles() {
        let (two, three) = (copy_recognizer(), mirror_recognizer());
        let mut rng = splitmix(17);
        for _ in 0..1000 {
            let (x, y, z) = (random_bits(&mut rng, 8), random_bits(&mut rng, 8), random_bits(&mut rng, 8));
            let good = format!("{x}#{y}#{z}#{z}#{y}#{x}");
            assert!(simulate_multihead(&three, &good));
            let bad = perturb(&mut rng, &good);
            assert_eq!(simulate_multihead(&three, &bad), mirror_pattern(&bad), "{bad}");
            let flip = below(&mut rng, good.len() as u64) as usize;
            let mut flipped: Vec<char> = good.chars().collect();
            if flipped[flip] != '#' {
                flipped[flip] = if flipped[flip] == '0' { '1' } else { '0' };
                assert!(!simulate_multihead(&three, &flipped.iter().collect::<String>()));
            }
            let c = format!("{x}#{x}");
            assert!(simulate_multihead(&two, &c));
            let bad = perturb(&mut rng, &c);
            assert_eq!(simulate_multihead(&two, &bad), copy_pattern(&bad), "{bad}");
        }
    }

    #[test]
    fn rejects_actions_without_progress() {
        let r = MultiheadAutomaton::from_fn(1, 1, 0, vec![true], |_, _| Some((0, 0)));
        assert_eq!(r, Err(AutomatonError::NoProgress { state: 0 }));
    }
}
