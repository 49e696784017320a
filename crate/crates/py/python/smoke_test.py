"""Smoke test for the ordpick_py extension. Run after installing the wheel."""

import os
import tempfile

import ordpick_py as op


def main():
    s = op.System.from_terms("[[((1,0,0),235),((0,2,0),42)],[((2,0,1),2),((0,0,0),-1)]]")
    assert s.n_vars == 3
    assert op.System.from_terms(s.to_terms()) == s

    assert op.discriminant("a*x^2 + b*x + c", "x", ["x", "a", "b", "c"]) == str(
        op.System.from_infix("b^2 - 4*a*c", ["x", "a", "b", "c"]).polys()[0]
    )
    assert op.resultant("x^2 + 1", "x + 1", "x", ["x"]) == "2"

    names = op.raw_descriptors(3)
    assert len(names) == 216 and "av_p(max_m(d_1))" in names
    assert s.features(["av_p(max_m(d_1))"]) == [1.5]

    orders = op.orderings(3)
    costs = s.timings()
    assert len(costs) == len(orders) == 6
    idx, perm, score = s.sotd_choose()
    assert perm == orders[idx] and score == s.sotd(perm)
    assert s.label_best() == idx
    assert s.brown_choose()[1] in orders

    problems = op.generate(30, seed=3)
    rows = {}
    for p in problems:
        rows.setdefault(tuple(p.features(names)), p.label_best())
    x, y = [list(r) for r in rows], list(rows.values())
    m = op.Model.train("KNN", "k=1 weighting=uniform", x, y, 6)
    assert m.family == "KNN" and m.predict(x) == y

    with tempfile.TemporaryDirectory() as d:
        cfg = os.path.join(d, "run.cfg")
        with open(cfg, "w") as f:
            f.write("generate = 30\nseed = 2\nfolds = 3\ncandidates = 2\nmodels = DT, KNN\n")
        written = op.run_pipeline(cfg, stamp="smoke")
        assert any(w.endswith("comparative_results_smoke.csv") for w in written), written

    print("python smoke test ok")


if __name__ == "__main__":
    main()
