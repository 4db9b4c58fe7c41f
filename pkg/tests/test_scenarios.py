"""Bundled scenario files and the scenario parser."""

import pytest

from bayesdrive.traffic.scenarios import (ScenarioError, initial_world_states,
                                          list_variants, load_case_doc,
                                          load_scenario, parse_scenario)


class TestBundledCases:
    def test_variant_lists(self):
        assert list_variants("I") == ["A", "B", "C", "D"]
        assert list_variants("II") == list("ABCDEFGH")

    def test_case1_structure(self):
        sc = load_scenario("I", "A")
        assert sc.n_players == 3
        assert sc.ego_index() == 0
        assert sc.vehicles[0].role == "ego"
        assert sc.vehicles[0].true_type is None
        assert len(sc.vehicles[0].selectable) == 2
        for v in sc.vehicles[1:]:
            assert v.role == "human"
            assert v.true_type is not None
        assert sc.stage_durations == (1.0, 1.0)

    def test_case1_action_sets(self):
        sc = load_scenario("I", "A")
        for v in sc.vehicles:
            speeds = {it.speeds for it in v.intents}
            assert (7.0, 8.0, 10.0, 12.0) in speeds
            assert (6.0, 4.0, 2.0, 0.0) in speeds

    def test_case1_variants_move_vehicles(self):
        a = load_scenario("I", "A")
        c = load_scenario("I", "C")
        assert a.vehicles[1].start_xy != c.vehicles[1].start_xy
        assert a.vehicles[1].true_type != c.vehicles[1].true_type

    def test_case2_structure(self):
        sc = load_scenario("II", "E")
        assert sc.n_players == 3
        assert sc.n_types == (4, 4, 4)
        assert sc.stage_durations == (1.0, 2.0)
        assert all(v.start_v == 7.0 for v in sc.vehicles)
        lat = sc.vehicles[0].intents[0].laterals
        assert lat == (-1.0, -0.5, 0.0, 0.5, 1.0)

    def test_case2_variant_types_differ(self):
        names = set()
        for variant in list_variants("II"):
            sc = load_scenario("II", variant)
            names.add(tuple(v.true_type for v in sc.vehicles[1:]))
        assert len(names) == 8

    def test_initial_world_states(self):
        sc = load_scenario("II", "A")
        states = initial_world_states(sc)
        assert states[0]["xy"] == pytest.approx([15.0, -5.0])
        assert states[1]["xy"] == pytest.approx([-5.0, 10.0])
        assert states[2]["xy"] == pytest.approx([10.0, 35.0])


class TestParsing:
    def test_unknown_variant_names_id(self):
        with pytest.raises(ScenarioError, match="Z"):
            load_scenario("I", "Z")

    def test_unknown_case(self):
        with pytest.raises(ScenarioError):
            load_scenario("/no/such/file.yaml", "A")

    def test_overrides_params_and_doc_keys(self):
        sc = load_scenario("I", "A", {"w_s": 500.0, "steps": 3,
                                      "obs_std": 1.0})
        assert sc.params.w_s == 500.0
        assert sc.steps == 3
        assert sc.obs_std == 1.0

    def test_unknown_override_rejected(self):
        with pytest.raises(ScenarioError, match="nope"):
            load_scenario("I", "A", {"nope": 1})

    def test_missing_true_type_rejected(self):
        doc = load_case_doc("I")
        doc = dict(doc, variants={"X": {"true_types": {}}})
        with pytest.raises(ScenarioError, match="true type"):
            parse_scenario(doc, "X")
