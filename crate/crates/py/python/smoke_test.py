"""Smoke test for the pyblockfunctor extension module."""

import pyblockfunctor as bf


def main():
    a = bf.Permutation.parse(3, "(1,2,3)")
    b = bf.Permutation.parse(3, "(1,2)")
    assert a.order() == 3 and (a * a.inverse()) == bf.Permutation.identity(3)
    assert str(a.conjugated_by(b)) == "(1,3,2)"

    s3 = bf.Group(3, [a, b], 3, name="S3")
    assert len(s3) == 6 and s3.invariants() == (3, 2, 1)
    assert bf.Group.parse(s3.to_text()).order == "6"

    report = s3.mult("both")
    assert report["schema_version"] == bf.SCHEMA_VERSION
    rows = [r["multiplicity"] for r in report["tables"]["multiplicities"]]
    assert rows == [2, 1, 0, 1], rows

    reg = bf.Registry()
    t_s3 = reg.mult_table(s3)
    t_c3 = reg.mult_table(bf.Group.fixture("c3.grp"), "fusion")
    assert t_s3.trivial_row() == t_s3.l == 2
    verdict = reg.compare(t_s3, t_c3)
    assert not verdict["stable"] and verdict["diff"]

    same = bf.compare(s3, bf.Group.fixture("s3_relabeled.grp"))
    assert same["meta"]["stable"] and same["meta"]["functorial"]

    _, ok = bf.Group.fixture("c5c4.grp").verify_psi()
    assert ok

    try:
        bf.Group.fixture("s4.grp").verify_psi()
    except bf.DomainError as e:
        assert "not normal" in str(e)
    else:
        raise AssertionError("S4 should be rejected")

    try:
        bf.Group.parse("degree 3\nprime 3\ngen (1,1,2)\n")
    except bf.ParseError as e:
        assert "line 3" in str(e)
    else:
        raise AssertionError("repeated point should not parse")

    _, ok = bf.selftest()
    assert ok
    print("smoke test passed")


if __name__ == "__main__":
    main()
