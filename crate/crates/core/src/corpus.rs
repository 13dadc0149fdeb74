//! Bundled test words.

use crate::words::{parse_presentation, WordPresentation};

pub const FILES: [(&str, &str); 8] = [
    ("chacon", include_str!("../corpus/chacon.r1")),
    ("odometer", include_str!("../corpus/odometer.r1")),
    ("simple_chain", include_str!("../corpus/simple_chain.r1")),
    ("random_1", include_str!("../corpus/random_1.r1")),
    ("random_2", include_str!("../corpus/random_2.r1")),
    ("random_3", include_str!("../corpus/random_3.r1")),
    ("random_4", include_str!("../corpus/random_4.r1")),
    ("random_5", include_str!("../corpus/random_5.r1")),
];

/// Words with distinct certified canonical chains: everything except the
/// degenerate odometer.
pub const METRIC: [&str; 7] = ["chacon", "simple_chain", "random_1", "random_2", "random_3", "random_4", "random_5"];

#[derive(Debug, Clone)]
pub struct CorpusWord {
    pub name: &'static str,
    pub presentation: WordPresentation,
}

pub fn all() -> Vec<CorpusWord> {
    FILES
        .iter()
        .map(|&(name, text)| CorpusWord {
            name,
            presentation: parse_presentation(text).expect("bundled corpus parses"),
        })
        .collect()
}

pub fn get(name: &str) -> Option<WordPresentation> {
    all().into_iter().find(|w| w.name == name).map(|w| w.presentation)
}

pub fn metric() -> Vec<CorpusWord> {
    all().into_iter().filter(|w| METRIC.contains(&w.name)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_extension, random_presentation};

    #[test]
    fn random_files_match_their_seeds() {
        let chacon = get("chacon").unwrap();
        assert_eq!(chacon, WordPresentation::chacon());
        let r1 = random_presentation(11);
        let r2 = random_extension(&chacon, 1, 12).unwrap();
        assert_eq!(get("random_1").unwrap(), r1);
        assert_eq!(get("random_2").unwrap(), r2);
        assert_eq!(get("random_3").unwrap(), random_extension(&chacon, 2, 13).unwrap());
        assert_eq!(get("random_4").unwrap(), random_extension(&r1, 1, 14).unwrap());
        assert_eq!(get("random_5").unwrap(), random_extension(&r2, 2, 15).unwrap());
        assert_eq!(metric().len(), 7);
    }
}
