use std::collections::VecDeque;

use super::{RewriteSystem, Word};
use crate::coeff::Field;

/// Aho-Corasick automaton over the leading words of a rewriting system,
/// used to count and enumerate normal words without materializing them.
#[derive(Clone, Debug)]
pub struct NormalWords {
    alphabet: Vec<u8>,
    /// `delta[state][letter]`, or `DEAD` if a leading word was completed.
    delta: Vec<Vec<u32>>,
}

const DEAD: u32 = u32::MAX;

impl NormalWords {
    pub fn new<F: Field>(sys: &RewriteSystem<F>) -> Self {
        Self::from_words(sys.generators().iter().map(|g| g.index()).collect(), sys.rules().iter().map(|r| &r.lhs))
    }

    /// Words over `alphabet` avoiding every pattern as a factor.
    pub fn from_words<'a>(alphabet: Vec<u8>, patterns: impl IntoIterator<Item = &'a Word>) -> Self {
        let k = alphabet.len();
        let pos = |g: u8| alphabet.iter().position(|&a| a == g);
        let mut goto: Vec<Vec<Option<u32>>> = vec![vec![None; k]];
        let mut terminal = vec![false];
        for w in patterns {
            let mut s = 0usize;
            let mut ok = true;
            for &g in w.bytes() {
                let Some(i) = pos(g) else {
                    ok = false;
                    break;
                };
                s = match goto[s][i] {
                    Some(t) => t as usize,
                    None => {
                        goto.push(vec![None; k]);
                        terminal.push(false);
                        let t = goto.len() - 1;
                        goto[s][i] = Some(t as u32);
                        t
                    }
                };
            }
            if ok {
                terminal[s] = true;
            }
        }
        let n = goto.len();
        let mut fail = vec![0usize; n];
        let mut delta = vec![vec![0u32; k]; n];
        let mut queue = VecDeque::new();
        for i in 0..k {
            match goto[0][i] {
                Some(t) => {
                    delta[0][i] = t;
                    queue.push_back(t as usize);
                }
                None => delta[0][i] = 0,
            }
        }
        while let Some(s) = queue.pop_front() {
            if terminal[fail[s]] {
                terminal[s] = true;
            }
            for i in 0..k {
                match goto[s][i] {
                    Some(t) => {
                        fail[t as usize] = delta[fail[s]][i] as usize;
                        delta[s][i] = t;
                        queue.push_back(t as usize);
                    }
                    None => delta[s][i] = delta[fail[s]][i],
                }
            }
        }
        // Terminal flags are final only after the BFS; apply them last.
        for row in delta.iter_mut() {
            for t in row.iter_mut() {
                if terminal[*t as usize] {
                    *t = DEAD;
                }
            }
        }
        NormalWords { alphabet, delta }
    }

    /// Number of normal words of each degree `0..=d`.
    pub fn counts(&self, d: usize) -> Vec<u64> {
        let n = self.delta.len();
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        let mut out = vec![1u64];
        for _ in 0..d {
            let mut next = vec![0u64; n];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &t in &self.delta[s] {
                    if t != DEAD {
                        next[t as usize] += c;
                    }
                }
            }
            out.push(next.iter().sum());
            cur = next;
        }
        out
    }

    /// All normal words of degree at most `d`, in increasing monomial order.
    pub fn enumerate(&self, d: usize) -> Vec<Word> {
        let mut layer: Vec<(Vec<u8>, u32)> = vec![(Vec::new(), 0)];
        let mut out = vec![Word::unit()];
        for _ in 0..d {
            let mut next = Vec::new();
            for (w, s) in &layer {
                for (i, &t) in self.delta[*s as usize].iter().enumerate() {
                    if t != DEAD {
                        let mut v = w.clone();
                        v.push(self.alphabet[i]);
                        next.push((v, t));
                    }
                }
            }
            let mut words: Vec<Word> = next.iter().map(|(v, _)| Word::from_bytes(v.clone())).collect();
            words.sort();
            out.extend(words);
            layer = next;
        }
        out
    }
}
