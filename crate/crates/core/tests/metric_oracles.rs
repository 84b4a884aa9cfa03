//! chrF and BLEU against naive n-gram counters over small alphabets.

use translit_core::metrics::{bleu, chrf_sentence, BleuConfig, ChrfConfig};
use translit_core::rng::Rng;

/// Occurrences of `gram` in `seq`, by direct comparison at every offset.
fn occurrences<T: PartialEq>(seq: &[T], gram: &[T]) -> usize {
    if gram.len() > seq.len() {
        return 0;
    }
    (0..=seq.len() - gram.len())
        .filter(|&i| &seq[i..i + gram.len()] == gram)
        .count()
}

/// Clipped matches, hypothesis total and reference total for one order.
fn clipped<T: PartialEq>(hyp: &[T], reference: &[T], n: usize) -> (usize, usize, usize) {
    let total = |s: &[T]| if s.len() >= n { s.len() - n + 1 } else { 0 };
    let mut matches = 0;
    for i in 0..total(hyp) {
        let gram = &hyp[i..i + n];
        // count each distinct gram once, at its first position
        if (0..i).any(|j| &hyp[j..j + n] == gram) {
            continue;
        }
        matches += occurrences(hyp, gram).min(occurrences(reference, gram));
    }
    (matches, total(hyp), total(reference))
}

pub fn chrf_oracle(hyp: &str, reference: &str, max_n: usize, beta: f64) -> f64 {
    let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
    let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    let mut precisions = Vec::new();
    let mut recalls = Vec::new();
    for n in 1..=max_n {
        let (m, th, tr) = clipped(&h, &r, n);
        if th > 0 && tr > 0 {
            precisions.push(m as f64 / th as f64);
            recalls.push(m as f64 / tr as f64);
        }
    }
    if precisions.is_empty() {
        return 0.0;
    }
    let p = precisions.iter().sum::<f64>() / precisions.len() as f64;
    let r = recalls.iter().sum::<f64>() / recalls.len() as f64;
    let b2 = beta * beta;
    if b2 * p + r == 0.0 {
        return 0.0;
    }
    100.0 * (1.0 + b2) * p * r / (b2 * p + r)
}

/// Sentence BLEU over whitespace tokens with exponential smoothing.
pub fn bleu_oracle(hyp: &str, reference: &str) -> f64 {
    let h: Vec<&str> = hyp.split_whitespace().collect();
    let r: Vec<&str> = reference.split_whitespace().collect();
    if h.is_empty() {
        return 0.0;
    }
    let mut product = 1.0f64;
    let mut zeros = 0;
    for n in 1..=4 {
        let (m, total, _) = clipped(&h, &r, n);
        if total == 0 {
            return 0.0;
        }
        let p = if m == 0 {
            zeros += 1;
            1.0 / (2f64.powi(zeros) * total as f64)
        } else {
            m as f64 / total as f64
        };
        product *= p;
    }
    let bp = if h.len() < r.len() {
        (1.0 - r.len() as f64 / h.len() as f64).exp()
    } else {
        1.0
    };
    100.0 * bp * product.powf(0.25)
}

/// Every string over `alphabet` of length exactly `len`.
pub fn strings(alphabet: &[char], len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |&c| {
                    let mut s = prefix.clone();
                    s.push(c);
                    s
                })
            })
            .collect();
    }
    out
}

fn spaced(s: &str) -> String {
    s.chars().map(String::from).collect::<Vec<_>>().join(" ")
}

const ABC: [char; 3] = ['a', 'b', 'c'];

fn check_pair(h: &str, r: &str, chrf_cfg: &ChrfConfig, bleu_cfg: &BleuConfig) {
    let got = chrf_sentence(h, r, chrf_cfg);
    let want = chrf_oracle(h, r, 6, 2.0);
    assert!((got - want).abs() < 1e-9, "chrF({h:?}, {r:?}) = {got}, oracle {want}");
    let (hs, rs) = (spaced(h), spaced(r));
    let got = bleu(&[&hs], &[&rs], bleu_cfg).unwrap();
    let want = bleu_oracle(&hs, &rs);
    assert!((got - want).abs() < 1e-9, "BLEU({hs:?}, {rs:?}) = {got}, oracle {want}");
}

#[test]
fn exhaustive_pairs_up_to_combined_length_eight() {
    let chrf_cfg = ChrfConfig::default();
    let bleu_cfg = BleuConfig::default();
    let by_len: Vec<Vec<String>> = (0..=8).map(|l| strings(&ABC, l)).collect();
    for lh in 0..=8 {
        for lr in 0..=8 - lh {
            for h in &by_len[lh] {
                for r in &by_len[lr] {
                    check_pair(h, r, &chrf_cfg, &bleu_cfg);
                }
            }
        }
    }
}

#[test]
fn sampled_pairs_up_to_length_ten() {
    let chrf_cfg = ChrfConfig::default();
    let bleu_cfg = BleuConfig::default();
    let mut rng = Rng::new(99);
    let random = |rng: &mut Rng| -> String {
        let len = rng.below(11);
        (0..len).map(|_| ABC[rng.below(3)]).collect()
    };
    for _ in 0..20_000 {
        let h = random(&mut rng);
        let r = if rng.below(4) == 0 { h.clone() } else { random(&mut rng) };
        check_pair(&h, &r, &chrf_cfg, &bleu_cfg);
    }
}

#[test]
fn oracle_matches_hand_computation() {
    // abcd vs abce at max_n 2: P = R = (3/4 + 2/3) / 2
    let pr = (0.75 + 2.0 / 3.0) / 2.0;
    assert!((chrf_oracle("abcd", "abce", 2, 2.0) - 100.0 * pr).abs() < 1e-12);
    assert!((bleu_oracle("a b c d", "a b c d") - 100.0).abs() < 1e-12);
}
