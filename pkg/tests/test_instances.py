"""Parameter derivation, cage catalog, generation, assembly, validation."""

import random
from fractions import Fraction

import pytest

from oracles import brute_girth
from spr_lab.cages import CATALOG, cage, cage_for
from spr_lab.graphs import WeightedGraph, girth
from spr_lab.instances import (
    GenerationError,
    Instance,
    assemble_instance,
    build_instance,
    derive_params,
    generate_cubic_high_girth,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    validate_instance,
)


class TestDeriveParams:
    def test_frozen_values_k_2_16(self):
        p = derive_params(2**16)
        assert (p.M, p.S, p.L, p.g) == (8, 40, Fraction(4, 25), 2)

    def test_frozen_values_k_2_100(self):
        p = derive_params(2**100)
        assert p.M == 25
        assert p.S == 66
        assert p.g == 10

    def test_paper_mode_needs_k_at_least_4(self):
        with pytest.raises(ValueError):
            derive_params(3)

    def test_custom_mode_accepts_arbitrary_combo(self):
        p = derive_params(14, mode="custom", M=2, S=3, L=Fraction(4), g=6)
        assert p.mode == "custom"
        assert p.flags()["S < g"] is True

    def test_custom_mode_validates_domains(self):
        with pytest.raises(ValueError):
            derive_params(4, mode="custom", M=0, S=1, L=Fraction(1), g=3)
        with pytest.raises(ValueError):
            derive_params(4, mode="custom", M=1, S=1, L=Fraction(-1), g=3)
        with pytest.raises(ValueError):
            derive_params(4, mode="custom", M=1, S=1, L=Fraction(1), g=2)

    def test_flag_exactness_at_boundary(self):
        # 2^(S-1) > log2(k) must be decided exactly: k = 2^16, S = 5 gives
        # 16 > 16 which is False; S = 6 gives 32 > 16, True
        p_false = derive_params(2**16, mode="custom", M=1, S=5, L=Fraction(1), g=3)
        p_true = derive_params(2**16, mode="custom", M=1, S=6, L=Fraction(1), g=3)
        assert p_false.flags()["2^(S-1) > log2(k)"] is False
        assert p_true.flags()["2^(S-1) > log2(k)"] is True

    def test_threshold_comparison_paper_mode_is_exact(self):
        # in paper mode the length cutoff is log2(k)/100, irrational for most k;
        # d <= log2(k)/100 iff 2^(100 d) <= k, checked in integers
        p = derive_params(2**300)
        assert p.dist_within_threshold(3) is True
        assert p.dist_within_threshold(4) is False

    def test_threshold_comparison_custom_mode_uses_fraction(self):
        p = derive_params(8, mode="custom", M=1, S=2, L=Fraction(7, 2), g=3)
        assert p.dist_within_threshold(3)
        assert not p.dist_within_threshold(4)
        assert p.weight_reaches_threshold(4)
        assert not p.weight_reaches_threshold(3)

    def test_dict_round_trip_preserves_fraction(self):
        p = derive_params(14, mode="custom", M=2, S=3, L=Fraction(4, 25), g=6)
        from spr_lab.instances import InstanceParams

        q = InstanceParams.from_dict(p.to_dict())
        assert q == p
        assert isinstance(q.L, Fraction)


class TestCages:
    def test_catalog_girths_match_algorithmic_girth(self):
        for name, (n, g) in CATALOG.items():
            g_graph = cage(name)
            assert g_graph.n == n
            assert girth(g_graph) == g
            assert all(len(g_graph.neighbors(v)) == 3 for v in range(n))

    def test_small_cage_girths_against_oracle(self):
        for name in ("petersen", "heawood"):
            g_graph = cage(name)
            assert brute_girth(g_graph) == CATALOG[name][1]

    def test_cage_for_exact_lookup(self):
        g_graph = cage_for(14, 6)
        assert g_graph.n == 14
        with pytest.raises(ValueError):
            cage_for(14, 7)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            cage("nope")


class TestGeneration:
    def test_cage_strategy_returns_catalog_graph(self):
        g_graph = generate_cubic_high_girth(10, 5, strategy="cage")
        assert g_graph == cage("petersen")

    def test_odd_vertex_count_rejected(self):
        with pytest.raises(ValueError):
            generate_cubic_high_girth(9, 3)

    def test_random_strategy_deterministic(self):
        a = generate_cubic_high_girth(16, 5, seed=3, strategy="random-repair")
        b = generate_cubic_high_girth(16, 5, seed=3, strategy="random-repair")
        assert a == b
        assert girth(a) >= 5
        assert all(len(a.neighbors(v)) == 3 for v in range(16))

    def test_random_strategy_varies_with_seed(self):
        a = generate_cubic_high_girth(20, 5, seed=1, strategy="random-repair")
        b = generate_cubic_high_girth(20, 5, seed=2, strategy="random-repair")
        assert girth(a) >= 5 and girth(b) >= 5
        assert a != b

    def test_infeasible_girth_raises(self):
        # girth 6 needs 14 vertices (the Heawood bound); 10 cannot do it
        with pytest.raises(GenerationError):
            generate_cubic_high_girth(10, 6, strategy="random-repair", max_swaps=2000)


class TestAssembly:
    def test_petersen_build_counts(self):
        params = derive_params(10, mode="custom", M=3, S=4, L=Fraction(1), g=5)
        inst = build_instance(cage("petersen"), params)
        assert inst.full.n == 20
        assert inst.full.edge_count == 25
        assert inst.k == 10
        assert inst.terminals == tuple(range(10, 20))

    def test_terminal_distance_decomposes(self):
        params = derive_params(10, mode="custom", M=3, S=4, L=Fraction(1), g=5)
        inst = build_instance(cage("petersen"), params)
        from spr_lab.graphs import distances_from

        core_d = distances_from(inst.core, 0)
        for j in range(1, 10):
            assert inst.pair_distance(0, j) == 2 * 3 + core_d[j]
        assert inst.pair_distance(0, 1) == 7
        assert inst.min_terminal_distance() == 7

    def test_build_rejects_low_girth_core(self):
        params = derive_params(10, mode="custom", M=1, S=2, L=Fraction(1), g=6)
        with pytest.raises(ValueError):
            build_instance(cage("petersen"), params)

    def test_build_rejects_non_cubic_core(self):
        core = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
        params = derive_params(4, mode="custom", M=1, S=2, L=Fraction(1), g=3)
        with pytest.raises(ValueError):
            build_instance(core, params)
        # but the permissive assembler takes it
        inst = assemble_instance(core, params)
        assert inst.k == 4

    def test_sub_terminal_assembly(self):
        c6 = WeightedGraph(6, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (0, 5, 1)])
        params = derive_params(3, mode="custom", M=2, S=2, L=Fraction(1), g=3)
        inst = assemble_instance(c6, params, terminal_vertices=(0, 2, 4))
        assert inst.full.n == 9
        assert inst.full.edge_count == 9
        assert not inst.is_full_terminal
        assert inst.terminal_vertex(1) == 7
        assert inst.attachment(1) == 2
        assert inst.pair_distance(0, 1) == 2 + 2 + 2

    def test_terminal_count_mismatch(self):
        params = derive_params(4, mode="custom", M=1, S=2, L=Fraction(1), g=3)
        c6 = WeightedGraph(6, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (0, 5, 1)])
        with pytest.raises(ValueError):
            assemble_instance(c6, params, terminal_vertices=(0, 2, 4))


class TestValidateInstance:
    def petersen(self, M=3):
        params = derive_params(10, mode="custom", M=M, S=4, L=Fraction(1), g=5)
        return build_instance(cage("petersen"), params)

    def test_clean_instance_passes(self):
        rep = validate_instance(self.petersen())
        assert rep.passed
        text = rep.render()
        assert "[ok  ]" in text and "FAIL" not in text
        assert "full-degree-sequence" in text

    def test_tampered_pendant_weight_caught(self):
        inst = self.petersen(M=3)
        edges = []
        for u, v, w in inst.full.edges:
            if v == 10:  # pendant edge of terminal 0
                edges.append((u, v, w + 1))
            else:
                edges.append((u, v, w))
        doctored = Instance(
            core=inst.core,
            params=inst.params,
            terminal_vertices=inst.terminal_vertices,
            full=WeightedGraph(inst.full.n, edges),
        )
        rep = validate_instance(doctored)
        assert not rep.passed
        assert any(c.name == "pendant-edges" for c in rep.failures())

    def test_tampered_core_weight_caught(self):
        inst = self.petersen()
        edges = [
            (u, v, (2 if (u, v) == (0, 1) else w)) for u, v, w in inst.full.edges
        ]
        doctored = Instance(
            core=inst.core,
            params=inst.params,
            terminal_vertices=inst.terminal_vertices,
            full=WeightedGraph(inst.full.n, edges),
        )
        rep = validate_instance(doctored)
        assert not rep.passed

    def test_low_girth_core_reported(self):
        core = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
        params = derive_params(4, mode="custom", M=1, S=2, L=Fraction(1), g=5)
        inst = assemble_instance(core, params)
        rep = validate_instance(inst)
        assert any(c.name == "core-girth" for c in rep.failures())


class TestInstanceSerialization:
    def test_round_trip_full_terminal(self, tmp_path):
        params = derive_params(10, mode="custom", M=3, S=4, L=Fraction(1), g=5)
        inst = build_instance(cage("petersen"), params)
        save_instance(inst, tmp_path / "inst.json")
        back = load_instance(tmp_path / "inst.json")
        assert back.full == inst.full
        assert back.params == inst.params
        assert back.terminal_vertices == inst.terminal_vertices
        # byte-exact: dumping again reproduces the file
        from spr_lab.graphs import dump_json

        assert dump_json(instance_to_dict(back)) == (tmp_path / "inst.json").read_text()

    def test_round_trip_sub_terminal(self):
        c6 = WeightedGraph(6, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (0, 5, 1)])
        params = derive_params(3, mode="custom", M=2, S=2, L=Fraction(1), g=3)
        inst = assemble_instance(c6, params, terminal_vertices=(0, 2, 4))
        d = instance_to_dict(inst)
        assert d["terminal_vertices"] == [0, 2, 4]
        back = instance_from_dict(d)
        assert back.full == inst.full

    def test_full_terminal_omits_redundant_key(self):
        params = derive_params(10, mode="custom", M=3, S=4, L=Fraction(1), g=5)
        inst = build_instance(cage("petersen"), params)
        assert "terminal_vertices" not in instance_to_dict(inst)

    def test_inconsistent_pendant_weight_rejected(self):
        params = derive_params(10, mode="custom", M=3, S=4, L=Fraction(1), g=5)
        inst = build_instance(cage("petersen"), params)
        d = instance_to_dict(inst)
        d["pendant_weight"] = 4
        with pytest.raises(ValueError):
            instance_from_dict(d)


class TestRandomizedAssembly:
    def test_assembled_instances_always_validate(self):
        rng = random.Random(11)
        from oracles import random_connected_graph

        done = 0
        while done < 25:
            core = random_connected_graph(rng, n_max=8)
            if core.n < 2 or any(w != 1 for _, _, w in core.edges):
                core = WeightedGraph(core.n, [(u, v, 1) for u, v, _ in core.edges])
            if core.n < 2:
                continue
            done += 1
            k = rng.randint(2, core.n)
            tv = tuple(sorted(rng.sample(range(core.n), k)))
            params = derive_params(k, mode="custom", M=rng.randint(1, 4), S=2, L=Fraction(1), g=3)
            inst = assemble_instance(core, params, terminal_vertices=tv)
            rep = validate_instance(inst)
            non_structural = [
                c for c in rep.failures() if c.name not in ("core-3-regular", "core-girth")
            ]
            assert non_structural == []
            assert inst.min_terminal_distance() >= 2 * inst.params.M + 1
