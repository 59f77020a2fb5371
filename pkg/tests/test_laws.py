from fsrkit.corpus import l_corpus, lr_corpus, lr_open_corpus
from fsrkit.laws import LawReport, compositional_laws, extra_candidates, number_laws
from fsrkit.machine import apply
from fsrkit.pole import Pole, parse_pole
from fsrkit.semantics import stage_models
from fsrkit.verdict import false, true, unknown


def test_report_counts_only_false_as_failure():
    rep = LawReport()
    p = Pole.empty()
    rep.add("i", p, "a", true())
    rep.add("i", p, "b", unknown("bound"))
    assert rep.ok and rep.tally()["i"] == {"True": 1, "Unknown": 1}
    rep.add("h", p, "c", false())
    assert not rep.ok and [c.detail for c in rep.failures] == ["c"]
    assert "h: False=1" in rep.summary()


def test_extra_candidates_are_total():
    for c in extra_candidates():
        assert all(apply(c, n) is not None for n in range(10))


def test_number_laws_small_sweep():
    poles = [parse_pole(s) for s in ("empty", "full", "seed:5")]
    rep = number_laws(poles, l_corpus()[:6], numbers=8, bound=8, partners=2)
    assert rep.ok
    assert {"k_pi", "k_pole", "i"} <= set(rep.tally())


def test_compositional_laws_small_sweep():
    m = stage_models(Pole.empty(), 2, bound=4)[2]
    rep = compositional_laws(m, lr_corpus()[:4], lr_open_corpus()[:3], numbers=4, partners=2)
    assert rep.ok and rep.cases
