//! Finite relational structures over the domain `[N] = {0, ..., N-1}`.

use std::collections::HashMap;

use crate::error::LogicError;
use crate::formula::{RelName, Var, Vocabulary};

pub type Element = u32;

/// Largest dense table a single relation may occupy.
pub const MAX_RELATION_POSITIONS: u128 = 1 << 28;

/// Partial map from variables to domain elements.
pub type Assignment = HashMap<Var, Element>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Table {
    arity: usize,
    bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    size: usize,
    vocab: Vocabulary,
    tables: Vec<Table>,
}

impl FiniteStructure {
    /// All relations empty.
    pub fn new(vocab: Vocabulary, size: usize) -> Result<Self, LogicError> {
        if size == 0 {
            return Err(LogicError::EmptyDomain);
        }
        let mut tables = Vec::with_capacity(vocab.len());
        for (name, arity) in vocab.iter() {
            let positions = (size as u128).pow(arity as u32);
            if positions > MAX_RELATION_POSITIONS {
                return Err(LogicError::StructureTooLarge {
                    relation: name.to_string(),
                    positions,
                });
            }
            tables.push(Table {
                arity,
                bits: vec![false; positions as usize],
            });
        }
        Ok(FiniteStructure {
            size,
            vocab,
            tables,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub(crate) fn relation_index(&self, name: &RelName) -> Option<usize> {
        self.vocab.iter().position(|(n, _)| n == name)
    }

    fn index_of(&self, table: &Table, tuple: &[Element]) -> Result<usize, LogicError> {
        let mut idx = 0usize;
        for &e in tuple {
            if e as usize >= self.size {
                return Err(LogicError::ElementOutOfRange {
                    element: e as u64,
                    size: self.size,
                });
            }
            idx = idx * self.size + e as usize;
        }
        debug_assert!(idx < table.bits.len() || table.arity == 0);
        Ok(idx)
    }

    fn table(&self, name: &RelName, len: usize) -> Result<(usize, &Table), LogicError> {
        let i = self
            .relation_index(name)
            .ok_or_else(|| LogicError::UnknownRelation(name.to_string()))?;
        let t = &self.tables[i];
        if t.arity != len {
            return Err(LogicError::ArityMismatch {
                relation: name.to_string(),
                expected: t.arity,
                found: len,
            });
        }
        Ok((i, t))
    }

    pub fn set(
        &mut self,
        name: &RelName,
        tuple: &[Element],
        value: bool,
    ) -> Result<(), LogicError> {
        let (i, t) = self.table(name, tuple.len())?;
        let idx = self.index_of(t, tuple)?;
        self.tables[i].bits[idx] = value;
        Ok(())
    }

    pub fn insert(&mut self, name: &str, tuple: &[Element]) -> Result<(), LogicError> {
        self.set(&RelName::new(name), tuple, true)
    }

    pub fn holds(&self, name: &RelName, tuple: &[Element]) -> Result<bool, LogicError> {
        let (_, t) = self.table(name, tuple.len())?;
        Ok(t.bits[self.index_of(t, tuple)?])
    }

    /// Fast path used by the evaluator; `idx` is the row-major tuple index.
    pub(crate) fn holds_raw(&self, rel: usize, idx: usize) -> bool {
        self.tables[rel].bits[idx]
    }

    pub(crate) fn set_raw(&mut self, rel: usize, idx: usize, value: bool) {
        self.tables[rel].bits[idx] = value;
    }

    pub(crate) fn positions(&self, rel: usize) -> usize {
        self.tables[rel].bits.len()
    }

    /// Tuples of a relation in lexicographic order.
    pub fn tuples(&self, name: &RelName) -> Result<Vec<Vec<Element>>, LogicError> {
        let i = self
            .relation_index(name)
            .ok_or_else(|| LogicError::UnknownRelation(name.to_string()))?;
        let t = &self.tables[i];
        Ok(t.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(idx, _)| decode_tuple(idx, t.arity, self.size))
            .collect())
    }

    /// Restricts to `vocab` (which must be a sub-vocabulary).
    pub fn restrict(&self, vocab: &Vocabulary) -> Result<FiniteStructure, LogicError> {
        let mut out = FiniteStructure::new(vocab.clone(), self.size)?;
        for (j, (name, arity)) in vocab.iter().enumerate() {
            let (_, t) = self.table(name, arity)?;
            out.tables[j].bits.clone_from(&t.bits);
        }
        Ok(out)
    }

    /// Extends the vocabulary with new (empty) relations, keeping existing facts.
    pub fn expand(&self, extra: &Vocabulary) -> Result<FiniteStructure, LogicError> {
        let mut vocab = self.vocab.clone();
        for (name, arity) in extra.iter() {
            vocab.ensure(name.clone(), arity)?;
        }
        let mut out = FiniteStructure::new(vocab, self.size)?;
        for (i, t) in self.tables.iter().enumerate() {
            out.tables[i].bits.clone_from(&t.bits);
        }
        Ok(out)
    }

    pub fn fact_count(&self) -> usize {
        self.tables
            .iter()
            .map(|t| t.bits.iter().filter(|b| **b).count())
            .sum()
    }
}

pub(crate) fn decode_tuple(mut idx: usize, arity: usize, size: usize) -> Vec<Element> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = (idx % size) as Element;
        idx /= size;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_roundtrip_through_dense_index() {
        let voc = Vocabulary::from_pairs([("E", 2), ("A", 0)]).unwrap();
        let mut s = FiniteStructure::new(voc, 3).unwrap();
        s.insert("E", &[2, 1]).unwrap();
        s.insert("E", &[0, 2]).unwrap();
        s.insert("A", &[]).unwrap();
        let e = s.tuples(&RelName::new("E")).unwrap();
        assert_eq!(e, vec![vec![0, 2], vec![2, 1]]);
        assert!(s.holds(&RelName::new("A"), &[]).unwrap());
        assert_eq!(s.fact_count(), 3);
    }

    #[test]
    fn rejects_out_of_range_and_bad_arity() {
        let voc = Vocabulary::from_pairs([("E", 2)]).unwrap();
        let mut s = FiniteStructure::new(voc, 2).unwrap();
        assert!(matches!(
            s.insert("E", &[0, 5]),
            Err(LogicError::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            s.insert("E", &[0]),
            Err(LogicError::ArityMismatch { .. })
        ));
        assert!(matches!(
            s.insert("F", &[0]),
            Err(LogicError::UnknownRelation(_))
        ));
    }
}
