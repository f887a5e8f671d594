//! JSON group description files.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GroupTable, MAX_FILE_ORDER};
use crate::error::{Error, Result};

/// Either a full multiplication table or a list of permutation generators
/// in one-line notation (images of `0..degree`, or of `1..=degree`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        name: String,
        p: u32,
        table: Vec<Vec<usize>>,
    },
    Permutations {
        name: String,
        p: u32,
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

pub fn load_group(spec: &GroupSpec) -> Result<GroupTable> {
    match spec {
        GroupSpec::Table { name, p, table } => {
            if table.len() > MAX_FILE_ORDER {
                return Err(Error::InvalidGroup(format!(
                    "{name}: order {} exceeds the supported maximum {MAX_FILE_ORDER}",
                    table.len()
                )));
            }
            GroupTable::from_table(name.clone(), *p, table)
        }
        GroupSpec::Permutations {
            name,
            p,
            degree,
            generators,
        } => {
            if *p != 2 {
                return Err(Error::UnsupportedPrime(*p));
            }
            let perms = normalize_permutations(name, *degree, generators)?;
            let rows = close_permutations(name, *degree, &perms)?;
            GroupTable::from_table(name.clone(), *p, &rows)
        }
    }
}

pub fn load_group_file(path: &Path) -> Result<GroupTable> {
    let text = std::fs::read_to_string(path)?;
    let spec: GroupSpec = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{}: not a group description: {e}", path.display())))?;
    load_group(&spec)
}

fn normalize_permutations(name: &str, degree: usize, generators: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let one_based = !generators.is_empty() && generators.iter().all(|g| !g.contains(&0) && g.contains(&degree));
    generators
        .iter()
        .enumerate()
        .map(|(k, g)| {
            if g.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "{name}: generator {k} has {} images, expected degree {degree}",
                    g.len()
                )));
            }
            let perm: Vec<usize> = if one_based {
                g.iter().map(|&x| x - 1).collect()
            } else {
                g.clone()
            };
            let mut seen = vec![false; degree];
            for &x in &perm {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidGroup(format!(
                        "{name}: generator {k} is not a permutation of {degree} points"
                    )));
                }
            }
            Ok(perm)
        })
        .collect()
}

/// Closes the generated permutation group; element 0 is the identity, the
/// rest in breadth-first discovery order. Product `(a b)(x) = a(b(x))`.
fn close_permutations(name: &str, degree: usize, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let identity: Vec<usize> = (0..degree).collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let y = compose(&elements[i], g);
            if !index.contains_key(&y) {
                if elements.len() == MAX_FILE_ORDER {
                    return Err(Error::InvalidGroup(format!(
                        "{name}: generated group exceeds order {MAX_FILE_ORDER}"
                    )));
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        i += 1;
    }
    Ok(elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_table() {
        let spec: GroupSpec = serde_json::from_str(r#"{"name": "C2", "p": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        let g = load_group(&spec).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.name(), "C2");
    }

    #[test]
    fn d8_from_permutations_matches_brute_force_closure() {
        // r = (1 2 3 4), s = (1 3) on four points, one-line and 1-based.
        let spec: GroupSpec =
            serde_json::from_str(r#"{"name": "D8", "p": 2, "degree": 4, "generators": [[2,3,4,1],[3,2,1,4]]}"#)
                .unwrap();
        let g = load_group(&spec).unwrap();
        // Brute force: all words of length <= 8 in r, s.
        let r = [1usize, 2, 3, 0];
        let s = [2usize, 1, 0, 3];
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![vec![0usize, 1, 2, 3]];
        for _ in 0..8 {
            let mut next = Vec::new();
            for p in &frontier {
                seen.insert(p.clone());
                for q in [&r, &s] {
                    next.push(p.iter().map(|&x| q[x]).collect::<Vec<_>>());
                }
            }
            frontier = next;
        }
        assert_eq!(seen.len(), 8);
        assert_eq!(g.order(), 8);
        assert_eq!(g.centre().order(), 2);
    }

    #[test]
    fn zero_based_generators() {
        let spec = GroupSpec::Permutations {
            name: "C4".into(),
            p: 2,
            degree: 4,
            generators: vec![vec![1, 2, 3, 0]],
        };
        assert_eq!(load_group(&spec).unwrap().order(), 4);
    }

    #[test]
    fn rejects_non_2_groups() {
        let order6: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        let spec = GroupSpec::Table {
            name: "C6".into(),
            p: 2,
            table: order6,
        };
        let err = load_group(&spec).unwrap_err().to_string();
        assert!(err.contains("not a 2-group"), "{err}");

        let s3 = GroupSpec::Permutations {
            name: "S3".into(),
            p: 2,
            degree: 3,
            generators: vec![vec![1, 2, 0], vec![1, 0, 2]],
        };
        assert!(load_group(&s3).is_err());

        let bad = GroupSpec::Permutations {
            name: "bad".into(),
            p: 2,
            degree: 3,
            generators: vec![vec![0, 0, 1]],
        };
        assert!(load_group(&bad).unwrap_err().to_string().contains("not a permutation"));
    }
}
