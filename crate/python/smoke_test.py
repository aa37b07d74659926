"""Smoke test for the `tvt` extension module.

Build it first:

    cargo build --release -p tvt-python --features extension-module

The script imports an installed `tvt` if there is one, and otherwise loads
the shared library from the cargo target directory.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_tvt():
    try:
        import tvt

        return tvt
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libtvt.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("tvt", str(lib))
            spec = importlib.util.spec_from_loader("tvt", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("tvt extension not found; build it with cargo first")


def main():
    tvt = load_tvt()

    lhs, rhs = tvt.Word("r1 s1 r1", 2), tvt.Word("g2 g1 s1 g1 g2", 2)
    assert tvt.words_equal(lhs, rhs)
    verdict, witness = tvt.decide_equal(lhs, rhs)
    assert verdict == "equal" and witness, verdict
    print("twist relation:", verdict, f"({len(witness)} rewrite steps)")

    print("nabla_3:", tvt.nabla(3))
    assert str(tvt.nabla(3)) == "r1 r2 r1 g1 g2 g3"

    w = tvt.Word("s1 r1 g2", 3)
    pure = tvt.rewrite_pure(w)
    assert tvt.words_equal(tvt.eval_pure(pure, 3), w)
    print("pure rewriting:", w, "->", pure)
    print("normal form:", w.normal_form())

    example = tvt.GaussData.from_json((ROOT / "data" / "example.gauss").read_text())
    assert example.components() == 1 and example.bar_parity() == 1
    braid = example.braid()
    assert braid.closure().same_as(example)
    print("worked example: components 1, bar parity 1, braid", braid)

    verdict, moves = tvt.markov_equivalent(tvt.Word("s1", 2), tvt.Word("", 1))
    assert verdict == "equivalent"
    print("markov: s1 ~ identity via", "; ".join(moves))

    print("ok")


if __name__ == "__main__":
    main()
