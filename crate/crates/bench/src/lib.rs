//! Fixtures shared by the benchmarks.

use commfib_core::{builtin, make_field, FullLieAlgebra, LiePresentation};

pub fn algebra(name: &str, p: u64, k: u32) -> FullLieAlgebra {
    let base = builtin(name, &make_field(p, 1, None).unwrap(), Some(1)).unwrap();
    base.base_extend(&make_field(p, k, None).unwrap()).unwrap()
}

pub fn presentation(name: &str, p: u64, k: u32) -> LiePresentation {
    algebra(name, p, k).reduce().unwrap()
}
