import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etamu import scenario as scn
from etamu.errors import DomainError


def test_grid_cardinality():
    assert len(scn.parse_grid("0:30:1").points()) == 31
    assert scn.parse_grid("0:30:5").points() == [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    assert scn.parse_grid("0:1:0.1").points()[-1] == 1.0
    assert scn.parse_grid("3:3:1").points() == [3.0]


@pytest.mark.parametrize("text", ["0:30", "a:b:c", "0:30:0", "0:30:-1", "10:0:1", "0:inf:1"])
def test_grid_rejects(text):
    with pytest.raises(DomainError):
        scn.parse_grid(text)


def test_bundled_scenarios_load():
    names = scn.shipped_names()
    assert names == [f"fig{i}.scn" for i in range(1, 7)]
    for name in names:
        sc = scn.shipped(name)
        assert sc.name == name[:-4]
        assert sc.fading_spec(2.0).mean_snr == 2.0
        assert sc.modulation().A > 0.0


def test_bundled_scenarios_round_trip():
    for name in scn.shipped_names():
        sc = scn.shipped(name)
        assert scn.loads(scn.dumps(sc)) == sc


def test_unknown_bundled():
    with pytest.raises(DomainError):
        scn.shipped("fig9")


def test_comments_and_defaults():
    sc = scn.loads("# a comment\nname=x\nfading.eta=0.25\n\n")
    assert sc.name == "x" and sc.eta == 0.25 and sc.fmt == "I"


@pytest.mark.parametrize(
    "text",
    [
        "fading.eta=abc",
        "colour=red",
        "snr_grid.start_db=0\nsnr_grid.stop_db=10",
        "fading.case=rician",
        "modulation.scheme=MPSK\nmodulation.M=6",
        "noise.a=0",
        "fading.format=III",
        "budget=-1",
    ],
)
def test_bad_scenarios(text):
    with pytest.raises(DomainError):
        scn.loads(text)


def test_overrides():
    sc = scn.shipped("fig5")
    o = scn.with_overrides(sc, grid=scn.parse_grid("0:10:5"), seed=9, budget=0.5)
    assert (o.grid.points(), o.seed, o.budget) == ([0.0, 5.0, 10.0], 9, 0.5)
    assert scn.with_overrides(sc) is sc


def test_special_case_scenarios():
    nak = scn.loads("fading.case=nakagami\nfading.m=2\nfading.branches=2")
    assert nak.fading_spec().mu_tilde == pytest.approx(4.0)
    hoyt = scn.loads("fading.case=hoyt_literature\nfading.q=0.5")
    assert hoyt.fading_spec().mu_tilde == pytest.approx(0.5)


def test_approx_record_reference(tmp_path):
    from etamu.approx import preset_qa, to_record

    (tmp_path / "qa.fit").write_text(to_record(preset_qa(1.5)))
    path = tmp_path / "s.scn"
    path.write_text("noise.a=1.5\napprox.noise=qa.fit\n")
    sc = scn.load(str(path))
    assert sc.noise_approximation() == preset_qa(1.5)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["I", "II"]),
    st.floats(0.01, 0.99),
    st.floats(0.25, 4.0),
    st.integers(1, 6),
    st.sampled_from([("BPSK", 2), ("MPSK", 8), ("MQAM_rect", 64), ("MPAM", 4)]),
    st.sampled_from([0.5, 1.0, 2.0]),
    st.floats(-20.0, 10.0),
    st.floats(0.1, 5.0),
    st.integers(0, 2**31),
)
def test_round_trip_property(fmt, eta, mu, L, mod, a, start, step, seed):
    sc = scn.Scenario(
        name="p",
        fmt=fmt,
        eta=eta,
        mu=mu,
        branches=L,
        scheme=mod[0],
        M=mod[1],
        noise_a=a,
        grid=scn.SnrGrid(start, start + 10.0 * step, step),
        seed=seed,
    )
    back = scn.loads(scn.dumps(sc))
    assert back == sc
    assert back.grid.points() == sc.grid.points()
