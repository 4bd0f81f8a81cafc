//! A bijective view of a numbered group: each element is named by the least
//! code that evaluates to it.

use std::collections::HashSet;

use crate::group::zoo::{CanonicalElement, GroupDescriptor};
use crate::word::ElementCode;

/// Lazily lists `(least code, element)` in increasing code order.
#[derive(Clone, Debug)]
pub struct InjectiveView<'a> {
    desc: &'a GroupDescriptor,
    next_code: u64,
    seen: HashSet<CanonicalElement>,
}

impl<'a> InjectiveView<'a> {
    pub fn new(desc: &'a GroupDescriptor) -> Self {
        InjectiveView {
            desc,
            next_code: 0,
            seen: HashSet::new(),
        }
    }

    /// Least code of `x`, scanning at most `budget` further codes.
    pub fn least_code_of(&mut self, x: &CanonicalElement, budget: u64) -> Option<ElementCode> {
        if self.seen.contains(x) {
            return (0..self.next_code)
                .map(ElementCode::from)
                .find(|c| &self.desc.eval(c) == x);
        }
        self.take(budget as usize).find(|(_, y)| y == x).map(|(c, _)| c)
    }
}

impl Iterator for InjectiveView<'_> {
    type Item = (ElementCode, CanonicalElement);

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(k) = self.desc.order() {
            if self.seen.len() == k {
                return None;
            }
        }
        loop {
            let c = ElementCode::from(self.next_code);
            self.next_code += 1;
            let x = self.desc.eval(&c);
            if self.seen.insert(x.clone()) {
                return Some((c, x));
            }
        }
    }
}
