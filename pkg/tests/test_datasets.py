import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankbasis.datasets import (
    Dataset,
    DatasetError,
    builtin_apa,
    load_dataset,
    rank_function_to_dataset,
    save_dataset,
)
from rankbasis.perms import enumerate_sn
from rankbasis.spectral import RankFunction


def test_apa_shape_and_known_records():
    ds = builtin_apa()
    assert ds.n == 5
    assert len(ds.records) == 120
    counts = dict(ds.records)
    assert counts["54321"] == 29
    assert counts["23154"] == 186
    assert counts["12345"] == 30
    assert counts["13245"] == 102


def test_apa_total_is_5738():
    # the embedded counts sum to 5738; the source material also quotes
    # 5972 in one place, which is inconsistent with its own table
    assert builtin_apa().total() == 5738


def test_builtin_loads_by_name():
    assert load_dataset("apa").records == builtin_apa().records


def test_round_trip_file(tmp_path):
    ds = builtin_apa()
    path = tmp_path / "apa.csv"
    save_dataset(ds, str(path))
    again = load_dataset(str(path))
    assert again.n == ds.n and again.records == ds.records


def test_rank_function_round_trip():
    f = builtin_apa().to_rank_function()
    assert rank_function_to_dataset(f).to_rank_function().counts == f.counts


def test_validation_errors(tmp_path):
    cases = [
        ("ranking,count\n54322,3\n", "not a permutation"),
        ("ranking,count\n12345,-1\n", "negative"),
        ("ranking,count\n12345,1\n12345,2\n", "duplicate"),
        ("ranking,count\n1234,1\n12345,1\n", "degree"),
    ]
    for text, needle in cases:
        p = tmp_path / "bad.csv"
        p.write_text(text)
        with pytest.raises(DatasetError) as exc:
            load_dataset(str(p))
        assert needle in str(exc.value)
        assert ":" in str(exc.value)  # line number is reported


def test_duplicate_rejected_in_constructor():
    with pytest.raises(DatasetError):
        Dataset(3, [("123", 1), ("123", 2)])


def test_missing_file():
    with pytest.raises(DatasetError):
        load_dataset("/nonexistent/never.csv")


@given(
    st.dictionaries(
        st.sampled_from(enumerate_sn(4)), st.integers(0, 9), min_size=1
    ).filter(lambda d: any(d.values()))
)
@settings(max_examples=25, deadline=None)
def test_round_trip_random_rank_functions(tmp_path_factory, d):
    f = RankFunction(4, d)
    ds = rank_function_to_dataset(f, name="random")
    path = tmp_path_factory.mktemp("ds") / "r.csv"
    save_dataset(ds, str(path))
    assert load_dataset(str(path)).to_rank_function().counts == {
        p: c for p, c in f.counts.items() if c
    }
