//! Built-in groups.

use super::GroupTable;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub group: GroupTable,
}

/// `<a, b | a^m = 1, b^2 = a^t, b a b^-1 = a^r>` with element `a^i b^j` at
/// index `i + m j`.
fn metacyclic(name: &str, m: usize, r: usize, t: usize) -> GroupTable {
    let n = 2 * m;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let (i, j) = (x % m, x / m);
            (0..n)
                .map(|y| {
                    let (k, l) = (y % m, y / m);
                    let twist = if j == 1 { r * k } else { k };
                    let wrap = if j == 1 && l == 1 { t } else { 0 };
                    (i + twist + wrap) % m + m * ((j + l) % 2)
                })
                .collect()
        })
        .collect();
    GroupTable::from_table(name, 2, &rows).expect("metacyclic presentation is a group")
}

fn cyclic(n: usize) -> GroupTable {
    GroupTable::cyclic(n).expect("power of two")
}

fn product(name: &str, a: &GroupTable, b: &GroupTable) -> GroupTable {
    GroupTable::direct_product(a, b).expect("same prime").with_name(name)
}

pub fn dihedral8() -> GroupTable {
    metacyclic("D8", 4, 3, 0)
}

pub fn quaternion8() -> GroupTable {
    metacyclic("Q8", 4, 3, 2)
}

/// The modular group of order 16, `<a, b | a^8 = b^2 = 1, bab = a^5>`.
pub fn modular16() -> GroupTable {
    metacyclic("M16", 8, 5, 0)
}

/// Catalog names in listing order.
pub fn catalog_names() -> Vec<&'static str> {
    catalog().into_iter().map(|e| e.name).collect()
}

pub fn catalog() -> Vec<CatalogEntry> {
    let c2 = cyclic(2);
    let c4 = cyclic(4);
    let v4 = product("C2^2", &c2, &c2);
    let d8 = dihedral8();
    let q8 = quaternion8();
    let groups = vec![
        ("C2", c2.clone()),
        ("C4", c4.clone()),
        ("C8", cyclic(8)),
        ("C16", cyclic(16)),
        ("C2^2", v4.clone()),
        ("C2^3", product("C2^3", &v4, &c2)),
        ("C4xC2", product("C4xC2", &c4, &c2)),
        ("D8", d8.clone()),
        ("Q8", q8.clone()),
        ("D8xC2", product("D8xC2", &d8, &c2)),
        ("Q8xC2", product("Q8xC2", &q8, &c2)),
        ("C4xC4", product("C4xC4", &c4, &c4)),
        ("M16", modular16()),
        ("D16", metacyclic("D16", 8, 7, 0)),
        ("Q16", metacyclic("Q16", 8, 7, 4)),
        ("SD16", metacyclic("SD16", 8, 3, 0)),
        ("C2^2xC4", product("C2^2xC4", &v4, &c4)),
        ("Q8xC4", product("Q8xC4", &q8, &c4)),
        ("Q16xC2", product("Q16xC2", &metacyclic("Q16", 8, 7, 4), &c2)),
        ("M32", metacyclic("M32", 16, 9, 0)),
    ];
    groups
        .into_iter()
        .map(|(name, group)| CatalogEntry {
            name,
            group: group.with_name(name),
        })
        .collect()
}

pub fn lookup(name: &str) -> Result<GroupTable> {
    catalog()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .map(|e| e.group)
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}
