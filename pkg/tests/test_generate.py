import pytest

from stapkit.generate import GenSpec, generate
from stapkit.instance import StapError, validate
from stapkit.io import format_instance
from stapkit.oracles import check_feasible_stap, exact_stap, nw_coverable


def test_path_two_terminals():
    inst = generate(GenSpec(family="path", terminals=2, steiner=0, density=1.0, seed=4))
    assert len(inst.tree_edges) == 1 and len(inst.links) >= 1
    assert check_feasible_stap(inst, range(len(inst.links)))


def test_deterministic():
    spec = GenSpec(family="caterpillar", terminals=7, steiner=3, costs="uniform-rational", seed=9)
    assert format_instance(generate(spec)) == format_instance(generate(spec))


def test_star_seed_one():
    inst = generate(GenSpec(family="star", terminals=6, seed=1, max_links=18))
    assert validate(inst).ok
    exact_stap(inst)


@pytest.mark.parametrize("family", ["random-tree", "star", "caterpillar", "path"])
@pytest.mark.parametrize("variant", ["edge", "node"])
def test_families_valid(family, variant):
    for seed in range(5):
        inst = generate(GenSpec(family=family, terminals=6, steiner=3, density=0.5, seed=seed, variant=variant))
        assert validate(inst).ok
        if variant == "node":
            assert nw_coverable(inst)
            assert all(ln.cost == 0 for ln in inst.links)
        else:
            assert check_feasible_stap(inst, range(len(inst.links)))


def test_degenerate_spec_runs_out_of_retries():
    with pytest.raises(StapError):
        generate(GenSpec(family="star", terminals=6, steiner=0, density=0.01, max_links=1, seed=2))


def test_bad_spec():
    with pytest.raises(ValueError):
        GenSpec(family="grid")
    with pytest.raises(ValueError):
        GenSpec(terminals=1)
