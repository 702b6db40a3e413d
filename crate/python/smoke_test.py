"""Smoke test for the `ence` extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import ence


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    bell = ence.bell_state()
    pt = ence.partial_transpose(bell, (2, 2), "B")
    vals = ence.eigvals_herm(pt)
    assert all(close(v, w) for v, w in zip(vals, [0.5, 0.5, 0.5, -0.5])), vals

    report = ence.pt_detect(bell, (2, 2))
    assert report["detected"] and close(report["deviation"], 0.5), report
    assert close(ence.ncc_measure(bell, (2, 2)), 1.0)

    rho = ence.rho_p(0.1)
    assert ence.pt_detect(rho, (2, 2))["detected"]

    pcc = ence.random_pcc_state((3, 2), seed=4)
    assert not ence.pt_detect(pcc, (3, 2))["detected"]
    assert ence.pcc_test(pcc, (3, 2))

    onewcc = ence.random_onewcc_state((2, 3), seed=5)
    assert ence.chen_test(onewcc, (2, 3), "B")["passes"]
    assert not ence.pcc_test(onewcc, (2, 3))
    assert not ence.pt_detect(onewcc, (2, 3), "B")["detected"]

    reduced = ence.partial_trace(bell, (2, 2), "B")
    assert close(reduced[0][0], 0.5) and close(reduced[0][1], 0.0)

    roots = ence.eig_general([[0, 1], [-1, 0]])
    assert ence.spectra_equal(roots, [1j, -1j], 1e-12), roots

    s = ence.random_invertible(3, max_cond=50.0, seed=1)
    for make, kind, branch in [
        (ence.Superoperator.conjugation, "Similarity", "IdentityBranch"),
        (ence.Superoperator.transpose_conjugation, "TransposeSimilarity", "TransposeBranch"),
    ]:
        l = make(s)
        assert l.d == 3
        got, s_hat, residual = ence.classify_preserver(l)
        assert got == kind and residual < 1e-8, (got, residual)
        assert ence.check_unital(l)
        assert ence.check_det_trace(l, samples=40, seed=2)
        assert ence.check_ep_on_density(l, samples=40, seed=2)["ep_on_samples"]
        result = ence.verify_main_theorem(l, 2, trials=10, seed=3)
        assert result["branch"] == branch, result

    t = ence.Superoperator.transpose(2)
    lifted = t.apply_partial(bell, (2, 2), "B")
    assert all(close(a, b) for ra, rb in zip(lifted, pt) for a, b in zip(ra, rb))

    scaled = ence.Superoperator([[2 if i == j else 0 for j in range(4)] for i in range(4)])
    assert ence.classify_preserver(scaled)[0] == "NotEP"
    try:
        ence.verify_main_theorem(scaled, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("non-EP map accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
