use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::new(py, "tvt").unwrap();
        tvt::tvt(&module).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("tvt", module).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.print(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn words() {
    run(c"
w = tvt.Word('s1 r1 g2', 3)
assert str(w) == 's1 r1 g2' and len(w) == 3 and w.strands == 3
assert w.perm_image() == [1, 2, 3] and w.is_pure()
assert w.abelianize() == (1, 1, 1)
assert str((w * w.invert()).free_reduce()) == ''
assert tvt.words_equal(tvt.Word('r1 s1 r1', 2), tvt.Word('g2 g1 s1 g1 g2', 2))
assert str(tvt.nabla(3)) == 'r1 r2 r1 g1 g2 g3'
assert tvt.Word('s1', 2) == tvt.Word('s1', 2) and hash(tvt.Word('s1', 2)) == hash(tvt.Word('s1', 2))
try:
    tvt.Word('s3', 2)
    raise AssertionError('accepted an out-of-range letter')
except ValueError:
    pass
");
}

#[test]
fn pure_rewriting_and_oracle() {
    run(c"
w = tvt.Word('s1 r1 g2', 3)
back = tvt.eval_pure(tvt.rewrite_pure(w), 3)
assert tvt.words_equal(back, w)
verdict, witness = tvt.decide_equal(back, w)
assert verdict == 'equal'
verdict, witness = tvt.decide_equal(tvt.Word('s1', 2), tvt.Word('r1', 2))
assert verdict == 'distinct' and len(witness) == 1
assert tvt.decide_equal(tvt.Word('s1 s2', 3), tvt.Word('s2 s1', 3), budget=0)[0] == 'unknown'
nf = w.normal_form()
assert nf.startswith('h=')
");
}

#[test]
fn gauss_and_markov() {
    run(c"
g = tvt.Word('s1 g1', 2).closure()
assert g.components() == 1 and g.bar_parity() == 1
h = tvt.GaussData.from_json(g.to_json())
assert h == g and h.same_as(g)
assert g.braid().closure().same_as(g)
verdict, moves = tvt.gauss_equivalent(tvt.Word('s1 s1 g1', 2).closure(), tvt.Word('g1', 2).closure())
assert verdict == 'equivalent' and moves
assert tvt.gauss_equivalent(g, tvt.Word('s1', 2).closure())[0] == 'distinct'
verdict, moves = tvt.markov_equivalent(tvt.Word('s1', 2), tvt.Word('', 1))
assert verdict == 'equivalent' and moves[-1].startswith('rewrite')
");
}
