use pyo3::prelude::*;
use pyo3::types::PyDict;

use novikov_py::novikov_py;

fn run(code: &std::ffi::CStr) {
    pyo3::append_to_inittab!(novikov_py);
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(code, Some(&globals), None).map_err(|e| e.display(py)).unwrap();
    });
}

#[test]
fn module_round_trips() {
    run(cr#"
import novikov_py as nv
u = nv.Series("(1)*z^0 + (-1)*z^1")
inv = u.invert(5)
assert str(inv) == "(1)*z^0 + (1)*z^1 + (1)*z^2 + (1)*z^3 + (1)*z^4 + O(z^5)", str(inv)
k = nv.CellComplex.corpus("klein_bottle")
assert [g for _, g in k.morse_complex().homology()] == ["Z", "Z+Z/2", "0"]
assert nv.glue_check_corpus("circle")
assert not nv.glue_check_corpus("torus_skewed")
"#);
}
