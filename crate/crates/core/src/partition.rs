use serde::Serialize;

use crate::error::{Error, Result};

/// A set partition of `{0..n-1}` in canonical form: members of each part
/// ascending, parts ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes `parts`, which must cover `0..n-1` for
    /// `n` the total member count.
    pub fn new(mut parts: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = parts.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for part in &mut parts {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            part.sort_unstable();
            for &i in part.iter() {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "index {i} out of range for {n} points"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
                seen[i] = true;
            }
        }
        parts.sort_unstable_by_key(|p| p[0]);
        Ok(Partition { parts })
    }

    /// Builds the partition whose parts are the level sets of `class_of`.
    pub fn from_classes(class_of: &[usize]) -> Self {
        let mut index_of_class = std::collections::HashMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for (i, &c) in class_of.iter().enumerate() {
            let slot = *index_of_class.entry(c).or_insert_with(|| {
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[slot].push(i);
        }
        // Parts were opened in order of first member, so this is canonical.
        Partition { parts }
    }

    /// The partition into singletons.
    pub fn discrete(n: usize) -> Self {
        Partition { parts: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Number of parts.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Number of points covered.
    pub fn n(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// Part index of every point.
    pub fn class_of(&self) -> Vec<usize> {
        let mut class = vec![0; self.n()];
        for (c, part) in self.parts.iter().enumerate() {
            for &i in part {
                class[i] = c;
            }
        }
        class
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes() {
        let p = Partition::new(vec![vec![3, 1], vec![2], vec![0]]).unwrap();
        assert_eq!(p.parts(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(p.k(), 3);
        assert_eq!(p.n(), 4);
        assert_eq!(p.class_of(), vec![0, 1, 2, 1]);
        assert_eq!(Partition::from_classes(&p.class_of()), p);
        assert_eq!(Partition::from_classes(&[7, 7, 2]).parts(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![vec![0], vec![]]).is_err());
        assert!(Partition::new(vec![vec![0, 0]]).is_err());
        assert!(Partition::new(vec![vec![0, 2]]).is_err());
    }
}
