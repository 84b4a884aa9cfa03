use std::collections::BTreeSet;

use proptest::prelude::*;

use translit_core::deromanizer::{decode_chars, encode_chars, CharEncodingConfig};
use translit_core::metrics::type_count;
use translit_core::romanizer::{deromanize_rule_based, is_reversible, romanize, strip_diacritics, Mode};
use translit_core::subword::{detokenize, segment, train_bpe};
use translit_core::tables;
use translit_core::vocabtransfer::{transfer_pieces, AssignmentKind};

const CYRILLIC: &str = "абвгдеёжзийклмнопрстуфхцчшщъыьэюяАБВГДЕЁЖЗИЙКЛМНОПРСТУФХЦЧШЩЫЭЮЯ";
const TOY: &str = "აბგდევზთიკლმნოპჟრსტუფქღყშჩცძწჭხჯჰ";

fn from_alphabet(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    let chars: Vec<char> = alphabet.chars().collect();
    prop::collection::vec(prop::sample::select(chars), 0..max).prop_map(|v| v.into_iter().collect())
}

fn sentence(alphabet: &'static str) -> impl Strategy<Value = String> {
    prop::collection::vec(
        from_alphabet(alphabet, 6).prop_filter("non-empty", |w| !w.is_empty()),
        1..6,
    )
    .prop_map(|words| words.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn romanize_is_deterministic(x in sentence(CYRILLIC)) {
        let t = tables::cyrillic();
        for mode in Mode::ALL {
            prop_assert_eq!(romanize(&x, &t, mode).unwrap(), romanize(&x, &t, mode).unwrap());
        }
    }

    #[test]
    fn unmapped_text_is_unchanged(x in "[a-zA-Z0-9 .,!?@/:-]{0,40}") {
        let t = tables::cyrillic();
        for mode in Mode::ALL {
            prop_assert_eq!(romanize(&x, &t, mode).unwrap(), x.clone());
        }
    }

    #[test]
    fn lossy_is_stripped_preserving_for_derived_tables(x in sentence(TOY)) {
        let t = tables::toy();
        prop_assume!(t.lossy_is_derived());
        let preserving = romanize(&x, &t, Mode::Preserving).unwrap();
        prop_assert_eq!(romanize(&x, &t, Mode::Lossy).unwrap(), strip_diacritics(&preserving));
    }

    #[test]
    fn reversible_tables_round_trip(x in sentence(CYRILLIC)) {
        let t = tables::cyrillic();
        prop_assert!(is_reversible(&t, Mode::Preserving).reversible());
        let r = romanize(&x, &t, Mode::Preserving).unwrap();
        prop_assert_eq!(deromanize_rule_based(&r, &t, Mode::Preserving, false).unwrap(), x);
    }

    #[test]
    fn romanization_never_adds_types(corpus in prop::collection::vec(sentence(CYRILLIC), 1..20)) {
        let t = tables::cyrillic();
        let original = type_count(&corpus);
        for mode in Mode::ALL {
            let romanized: Vec<String> = corpus.iter().map(|s| romanize(s, &t, mode).unwrap()).collect();
            prop_assert!(type_count(&romanized) <= original);
        }
    }

    #[test]
    fn char_encoding_round_trips(x in "[a-zа-я ,.?]{0,30}") {
        let cfg = CharEncodingConfig::default();
        let encoded = encode_chars(&x, &cfg).unwrap();
        prop_assert_eq!(decode_chars(&encoded, &cfg).unwrap(), x);
    }

    #[test]
    fn bpe_is_lossless_at_full_coverage(
        corpus in prop::collection::vec(sentence("abcdxyzé"), 1..12),
        size in 12usize..60,
    ) {
        let vocab = train_bpe(&corpus, size, 1.0).unwrap();
        for line in &corpus {
            prop_assert_eq!(&detokenize(&segment(line, &vocab), &vocab), line);
        }
    }

    #[test]
    fn more_merges_never_lengthen_training_text(corpus in prop::collection::vec(sentence("abcd"), 2..12)) {
        let mut previous = usize::MAX;
        for size in [6usize, 10, 16, 24, 40] {
            let vocab = train_bpe(&corpus, size, 1.0).unwrap();
            let total: usize = corpus.iter().map(|l| segment(l, &vocab).len()).sum();
            prop_assert!(total <= previous);
            previous = total;
        }
    }

    #[test]
    fn transfer_is_injective_and_stable(
        parent in prop::collection::btree_set("[a-f]{1,3}", 5..40),
        child in prop::collection::btree_set("[a-h]{1,3}", 1..30),
        seed in any::<u64>(),
    ) {
        let parent: Vec<String> = parent.into_iter().collect();
        let child: Vec<String> = child.into_iter().collect();
        prop_assume!(child.len() <= parent.len());
        let a = transfer_pieces(&parent, &child, seed).unwrap();
        let b = transfer_pieces(&parent, &child, seed.wrapping_add(1)).unwrap();
        prop_assert_eq!(&a, &transfer_pieces(&parent, &child, seed).unwrap());

        let positions: BTreeSet<usize> = a.assignments.iter().map(|x| x.position).collect();
        prop_assert_eq!(positions.len(), child.len());
        prop_assert!(positions.iter().all(|&p| p < parent.len()));
        prop_assert_eq!(a.matched_count + a.replaced_count, child.len());
        prop_assert_eq!(a.unused_remaining, parent.len() - child.len());

        for (x, y) in a.assignments.iter().zip(&b.assignments) {
            prop_assert_eq!(&x.piece, &y.piece);
            if x.kind == AssignmentKind::Matched {
                prop_assert_eq!(&parent[x.position], &x.piece);
                prop_assert_eq!(x, y);
            } else {
                prop_assert!(!parent.contains(&x.piece));
            }
        }
    }
}
