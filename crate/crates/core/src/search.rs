//! Reservoir lookup by name with an edit-distance fallback.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::catalog::{Catalog, ReservoirRecord};

fn fold(s: &str) -> Vec<char> {
    s.chars().flat_map(char::to_lowercase).collect()
}

fn edit_distance(a: &[char], b: &[char]) -> usize {
    if a.len() < b.len() {
        return edit_distance(b, a);
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = alloc::vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Levenshtein distance between the case-folded forms of `a` and `b`,
/// counted in `char`s.
pub fn levenshtein(a: &str, b: &str) -> usize {
    edit_distance(&fold(a), &fold(b))
}

/// The outcome category of a [`search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MatchKind {
    /// At least one record has exactly this name.
    ExactMatch,
    /// A close name was found.
    Suggestion,
    /// Nothing close enough.
    NotFound,
}

/// The closest catalog name to a query that matched nothing exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Suggestion {
    /// Suggested catalog name.
    pub name: String,
    /// Its edit distance from the query, at least 1.
    pub distance: usize,
}

/// Search result. `matches` is filled only for exact matches and
/// `suggestion` only for suggestions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SearchOutcome {
    /// Category.
    pub kind: MatchKind,
    /// Every record whose name equals the query.
    pub matches: Vec<ReservoirRecord>,
    /// Closest name when nothing matched exactly.
    pub suggestion: Option<Suggestion>,
}

/// Invalid search input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchError {
    /// The query is empty after trimming.
    EmptyQuery,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("search query is empty")
    }
}

impl core::error::Error for SearchError {}

/// Largest edit distance still offered as a suggestion.
pub fn suggestion_cutoff(query_chars: usize) -> usize {
    3.max(query_chars.div_ceil(2))
}

/// Finds every record named `query` (trimmed, case-insensitive), or else the
/// single closest name within [`suggestion_cutoff`].
///
/// Ties between equally distant names go to the shorter name, then the
/// lexicographically smaller one.
pub fn search(catalog: &Catalog, query: &str) -> Result<SearchOutcome, SearchError> {
    let q = query.trim();
    if q.is_empty() {
        return Err(SearchError::EmptyQuery);
    }
    let folded = fold(q);
    let matches: Vec<ReservoirRecord> = catalog
        .records()
        .iter()
        .filter(|r| fold(r.name.trim()) == folded)
        .cloned()
        .collect();
    if !matches.is_empty() {
        return Ok(SearchOutcome {
            kind: MatchKind::ExactMatch,
            matches,
            suggestion: None,
        });
    }

    let mut names: Vec<&str> = catalog.records().iter().map(|r| r.name.trim()).collect();
    names.sort_unstable();
    names.dedup();
    let best = names
        .into_iter()
        .map(|n| (edit_distance(&folded, &fold(n)), n.chars().count(), n))
        .min();
    let cutoff = suggestion_cutoff(folded.len());
    Ok(match best {
        Some((distance, _, name)) if distance <= cutoff => SearchOutcome {
            kind: MatchKind::Suggestion,
            matches: Vec::new(),
            suggestion: Some(Suggestion {
                name: name.into(),
                distance,
            }),
        },
        _ => SearchOutcome {
            kind: MatchKind::NotFound,
            matches: Vec::new(),
            suggestion: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Textbook full-matrix recurrence, kept apart from the two-row version.
    fn dp_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.to_lowercase().chars().collect();
        let b: Vec<char> = b.to_lowercase().chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        d[0] = (0..=b.len()).collect();
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
                d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            }
        }
        d[a.len()][b.len()]
    }

    fn cat(names: &[&str]) -> Catalog {
        let records = names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                ReservoirRecord::new(alloc::format!("id{i}"), *n, 0.0, 0.0, 2.0, 10.0, 5.0).unwrap()
            })
            .collect();
        Catalog::new(records, 1.0).unwrap()
    }

    #[test]
    fn levenshtein_examples() {
        assert_eq!(levenshtein("huron", "huron"), 0);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(dp_oracle("kitten", "sitting"), 3);
        assert_eq!(levenshtein("HURON", "huron"), 0);
    }

    #[test]
    fn exact_match_is_case_insensitive_and_complete() {
        let c = cat(&["Lake Huron", "Mud Lake", "Mud Lake", "Crystal Lake"]);
        let out = search(&c, "  LAKE HURON ").unwrap();
        assert_eq!(out.kind, MatchKind::ExactMatch);
        assert_eq!(out.matches.len(), 1);
        let out = search(&c, "mud lake").unwrap();
        let ids: Vec<_> = out.matches.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, vec!["id1", "id2"]);
        assert!(out.suggestion.is_none());
    }

    #[test]
    fn suggestion_and_not_found() {
        let c = cat(&["Lake Huron", "Mud Lake", "Crystal Lake"]);
        let out = search(&c, "Lake Huronn").unwrap();
        assert_eq!(out.kind, MatchKind::Suggestion);
        assert_eq!(
            out.suggestion,
            Some(Suggestion {
                name: "Lake Huron".into(),
                distance: 1
            })
        );
        assert!(out.matches.is_empty());
        // closest is "Mud Lake" at distance 12 > cutoff 6
        let out = search(&c, "zzzzzzzzzzzz").unwrap();
        assert_eq!(out.kind, MatchKind::NotFound);
        assert_eq!(search(&c, "   "), Err(SearchError::EmptyQuery));
        assert_eq!(search(&cat(&[]), "x").unwrap().kind, MatchKind::NotFound);
    }

    #[test]
    fn ties_prefer_shorter_then_lexicographic() {
        // "Lak" -> "Lake" (1 insert) and "Lax" (1 substitution): shorter wins.
        let c = cat(&["Lake", "Lax"]);
        assert_eq!(search(&c, "Lak").unwrap().suggestion.unwrap().name, "Lax");
        let c = cat(&["Bab", "Aab"]);
        assert_eq!(search(&c, "Cab").unwrap().suggestion.unwrap().name, "Aab");
    }

    #[test]
    fn cutoff_values() {
        assert_eq!(suggestion_cutoff(1), 3);
        assert_eq!(suggestion_cutoff(6), 3);
        assert_eq!(suggestion_cutoff(7), 4);
        assert_eq!(suggestion_cutoff(12), 6);
    }

    proptest::proptest! {
        #[test]
        fn metric_axioms_against_oracle(a in "[a-dA-D ]{0,8}", b in "[a-dA-D ]{0,8}", c in "[a-dA-D ]{0,8}") {
            let ab = levenshtein(&a, &b);
            proptest::prop_assert_eq!(ab, dp_oracle(&a, &b));
            proptest::prop_assert_eq!(levenshtein(&a, &a), 0);
            proptest::prop_assert_eq!(ab, levenshtein(&b, &a));
            proptest::prop_assert!(levenshtein(&a, &c) <= ab + levenshtein(&b, &c));
        }

        #[test]
        fn search_is_deterministic(q in "[a-z ]{1,12}") {
            let c = cat(&["Lake Huron", "Mud Lake", "Mud Lake", "Crystal Lake", "Round, Lake"]);
            if !q.trim().is_empty() {
                proptest::prop_assert_eq!(search(&c, &q).unwrap(), search(&c, &q).unwrap());
            }
        }
    }
}
