"""Smoke test for the novikov_py extension.

Build and install first, e.g. `maturin develop` or
`maturin build -o dist && pip install dist/*.whl`, then run this file.
"""

import novikov_py as nv


def main():
    u = nv.Series("(1)*x^[0]*z^0 + (1)*x^[1]*z^1", rank=1)
    inv = u.invert(6)
    assert (u * inv).congruent(nv.Series("(1)*x^[0]*z^0", rank=1), 6)
    assert str(nv.Series(str(inv), rank=1)) == str(inv)
    assert inv.precision == 6

    rp2 = nv.CellComplex.corpus("projective_plane")
    assert [g for _, g in rp2.morse_complex().homology()] == ["Z", "Z/2", "0"]

    torus = nv.CellComplex.corpus("torus")
    pairs = torus.random_field(seed=3)
    assert torus.validate_field(pairs) == []
    c = torus.morse_complex(pairs)
    assert c.verify() == []
    assert [g for _, g in c.homology()] == ["Z", "Z^2", "Z"]
    assert nv.ChainComplex.from_json(c.to_json()).dims() == c.dims()

    assert nv.glue_check_corpus("sphere")

    circle_fd = nv.FundamentalDomain.corpus("circle_domain")
    gamma = circle_fd.extract_gamma()
    for l in range(1, 5):
        fhat = gamma.assemble_fhat(l + 1)
        assert fhat.congruence(circle_fd.z_graded_complex(l), l + 1) is None
    assert all(r == 0 for _, r in gamma.build_e(8).novikov_ranks(8))
    assert nv.Gamma.from_json(gamma.to_json()).validate(8) == 0

    try:
        nv.Series("(2)*z^0 + (1)*z^1").invert(4)
    except ValueError:
        pass
    else:
        raise AssertionError("2 + z is not a unit")
    print("smoke test passed")


if __name__ == "__main__":
    main()
