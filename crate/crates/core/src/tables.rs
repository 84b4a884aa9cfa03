//! Demonstration mapping tables bundled with the crate.

use crate::romanizer::MappingTable;

pub const CYRILLIC_TSV: &str = include_str!("../tables/cyrillic.tsv");
pub const MANDARIN_TSV: &str = include_str!("../tables/mandarin.tsv");
pub const HEBREW_TSV: &str = include_str!("../tables/hebrew.tsv");
pub const TOY_TSV: &str = include_str!("../tables/toy.tsv");

pub const NAMES: [&str; 4] = ["cyrillic", "mandarin", "hebrew", "toy"];

/// Looks up a bundled table by name.
pub fn by_name(name: &str) -> Option<MappingTable> {
    let text = match name {
        "cyrillic" => CYRILLIC_TSV,
        "mandarin" => MANDARIN_TSV,
        "hebrew" => HEBREW_TSV,
        "toy" => TOY_TSV,
        _ => return None,
    };
    Some(MappingTable::from_tsv(name, text).expect("bundled table is valid"))
}

pub fn cyrillic() -> MappingTable {
    by_name("cyrillic").unwrap()
}

pub fn mandarin() -> MappingTable {
    by_name("mandarin").unwrap()
}

pub fn hebrew() -> MappingTable {
    by_name("hebrew").unwrap()
}

pub fn toy() -> MappingTable {
    by_name("toy").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_tables_parse() {
        for name in NAMES {
            let t = by_name(name).unwrap();
            assert!(!t.is_empty(), "{name}");
        }
        assert!(by_name("klingon").is_none());
    }

    #[test]
    fn toy_lossy_targets_are_derived() {
        assert!(toy().lossy_is_derived());
    }
}
