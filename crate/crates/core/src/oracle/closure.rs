//! Closed-set enumeration for a binary relation between a small object set
//! (at most 32 objects) and an attribute set of at most 256 elements.

use super::bitset::{VSet, CAPACITY};

pub struct Context {
    objects: usize,
    rows: Vec<VSet>,
    cols: Vec<u32>,
    all_attrs: VSet,
}

impl Context {
    pub fn from_fn(objects: usize, attrs: usize, mut rel: impl FnMut(usize, usize) -> bool) -> Context {
        assert!(objects <= 32 && attrs <= CAPACITY);
        let mut rows = vec![VSet::EMPTY; objects];
        let mut cols = vec![0u32; attrs];
        for (o, row) in rows.iter_mut().enumerate() {
            for (a, col) in cols.iter_mut().enumerate() {
                if rel(o, a) {
                    row.insert(a);
                    *col |= 1 << o;
                }
            }
        }
        Context {
            objects,
            rows,
            cols,
            all_attrs: VSet::prefix(attrs),
        }
    }

    fn all_objects(&self) -> u32 {
        if self.objects == 32 {
            u32::MAX
        } else {
            (1u32 << self.objects) - 1
        }
    }

    /// Attributes shared by every object in `objs`.
    pub fn intent(&self, mut objs: u32) -> VSet {
        let mut out = self.all_attrs;
        while objs != 0 {
            out = out.and(&self.rows[objs.trailing_zeros() as usize]);
            objs &= objs - 1;
        }
        out
    }

    /// Objects carrying every attribute in `attrs`.
    pub fn extent(&self, attrs: &VSet) -> u32 {
        attrs.iter().fold(self.all_objects(), |acc, a| acc & self.cols[a])
    }

    pub fn closure(&self, objs: u32) -> (u32, VSet) {
        let intent = self.intent(objs);
        (self.extent(&intent), intent)
    }

    /// Calls `visit(extent, intent)` for every closed object set, in lectic
    /// order, and returns how many there were.
    pub fn for_each_closed(&self, mut visit: impl FnMut(u32, &VSet)) -> u64 {
        let (mut a, mut b) = self.closure(0);
        let mut count = 0u64;
        loop {
            visit(a, &b);
            count += 1;
            let mut advanced = false;
            for i in (0..self.objects).rev() {
                let bit = 1u32 << i;
                if a & bit != 0 {
                    continue;
                }
                let below = bit - 1;
                let (c, d) = self.closure((a & below) | bit);
                if c & below == a & below {
                    a = c;
                    b = d;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return count;
            }
        }
    }
}
