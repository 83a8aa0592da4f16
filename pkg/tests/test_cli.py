import json

from diffeokit.catalog import build_catalog_space, catalog_names
from diffeokit.cli import run_command
from diffeokit.textio import export_presentation, parse_presentation


def run(capsys, argv):
    code = run_command(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run(capsys, argv + ["--json"])
    return code, json.loads(out), err


WEDGE_FORM_FILE = (
    export_presentation(build_catalog_space("wedge_lines", {"m": 2}).presentation)
    + "form basis_x : degree 1 on wedge_lines\n"
    + "on x1 : 2 d[1]\n"
    + "on x2 : 3 d[1]\n"
)

Z2_FILE = (
    export_presentation(build_catalog_space("z2_quotient").presentation)
    + "form vol : degree 2 on z2_quotient\n"
    + "on c : d[1,2]\n"
    + "form bad : degree 1 on z2_quotient\n"
    + "on c : d[1]\n"
)

SECTION_FILE = """
section ok : tangent on wedge_lines
on x1 : [s1^2]
on x2 : [s1^3]
section off : tangent on wedge_lines
on x1 : [1 + s1]
on x2 : [s1]
section ell : cotangent on wedge_lines
on x1 : [1 + s1]
on x2 : [2 - s1]
"""


class TestStatedInvocations:
    def test_rho_on_glued_axes(self, capsys):
        code, out, _ = run(capsys, ["rho", "catalog:wedge_lines", "--k", "2"])
        assert code == 0
        assert "source 0, target 1" in out
        assert "not surjective" in out

    def test_filtered_on_the_quotient(self, capsys):
        code, out, _ = run(capsys, ["filtered", "catalog:z2_quotient", "--depth", "4"])
        assert code == 0
        assert "weakly_filtered: yes" in out
        assert "filtered: no" in out

    def test_tangent_on_spaghetti(self, capsys):
        code, out, _ = run(
            capsys, ["tangent", "catalog:spaghetti", "--params", "m=3"]
        )
        assert code == 0
        assert "dim T = 3" in out


class TestJsonAgreesWithTables:
    def test_rho_numbers_match(self, capsys):
        _, out, _ = run(capsys, ["rho", "catalog:wedge_lines", "--k", "2"])
        code, payload, _ = run_json(capsys, ["rho", "catalog:wedge_lines", "--k", "2"])
        assert code == 0
        assert f"source {payload['source_dim']}" in out
        assert f"target {payload['target_dim']}" in out
        assert f"rank {payload['rank']}" in out
        assert payload["surjective"] is False
        assert payload["injective"] is True
        assert payload["iso"] is False

    def test_filtered_fields_match(self, capsys):
        _, out, _ = run(capsys, ["filtered", "catalog:z2_quotient", "--depth", "4"])
        code, payload, _ = run_json(
            capsys, ["filtered", "catalog:z2_quotient", "--depth", "4"]
        )
        assert code == 0
        assert f"weakly_filtered: {payload['weakly_filtered']}" in out
        assert f"filtered: {payload['filtered']}" in out
        assert str(payload["arrow_count"]) in out

    def test_tangent_dim_matches(self, capsys):
        _, out, _ = run(capsys, ["tangent", "catalog:spaghetti", "--params", "m=3"])
        code, payload, _ = run_json(
            capsys, ["tangent", "catalog:spaghetti", "--params", "m=3"]
        )
        assert code == 0
        assert f"dim T = {payload['dim']}" in out


class TestFormCommands:
    def test_check_form_compatible(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, out, _ = run(capsys, ["check-form", str(path), "--form", "vol"])
        assert code == 0
        assert "compatible" in out

    def test_check_form_incompatible_reports_arrow_and_residual(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, payload, _ = run_json(capsys, ["check-form", str(path), "--form", "bad"])
        assert code == 0  # negative verdicts exit 0 without --strict
        assert payload["compatible"] is False
        assert payload["failing_arrow"] == "neg"
        assert "d[1]" in payload["residual"]

    def test_check_form_strict_exit_code(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, _, _ = run(capsys, ["check-form", str(path), "--form", "bad", "--strict"])
        assert code == 1

    def test_eval_form_coordinates(self, capsys, tmp_path):
        path = tmp_path / "wedge.dk"
        path.write_text(WEDGE_FORM_FILE)
        code, payload, _ = run_json(capsys, ["eval-form", str(path), "--form", "basis_x"])
        assert code == 0
        assert payload["coords"] == ["2", "3"]
        assert payload["fibre_dim"] == 2

    def test_eval_form_on_z2_volume(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, payload, _ = run_json(capsys, ["eval-form", str(path), "--form", "vol"])
        assert code == 0
        assert payload["coords"] == ["1"]

    def test_unknown_form_is_an_input_error(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, _, err = run(capsys, ["check-form", str(path), "--form", "nope"])
        assert code == 2
        assert "unknown form" in err

    def test_eval_form_incompatible_is_a_negative_verdict(self, capsys, tmp_path):
        path = tmp_path / "z2.dk"
        path.write_text(Z2_FILE)
        code, payload, _ = run_json(capsys, ["eval-form", str(path), "--form", "bad"])
        assert code == 0
        assert payload["compatible"] is False
        assert payload["failing_arrow"] == "neg"
        code, _, _ = run(capsys, ["eval-form", str(path), "--form", "bad", "--strict"])
        assert code == 1


class TestSectionsCommand:
    def test_sections_report(self, capsys, tmp_path):
        space_path = tmp_path / "wedge.dk"
        space_path.write_text(
            export_presentation(build_catalog_space("wedge_lines", {"m": 2}).presentation)
        )
        data_path = tmp_path / "sections.dk"
        data_path.write_text(SECTION_FILE)
        code, payload, _ = run_json(
            capsys, ["sections", str(space_path), "--data", str(data_path)]
        )
        assert code == 0
        by_name = {entry["name"]: entry for entry in payload["sections"]}
        assert by_name["ok"]["valid"] is True
        assert by_name["off"]["valid"] is False
        assert by_name["ell"]["valid"] is True
        assert by_name["ell"]["functional"] == ["1", "2"]

    def test_sections_strict_exit(self, capsys, tmp_path):
        space_path = tmp_path / "wedge.dk"
        space_path.write_text(
            export_presentation(build_catalog_space("wedge_lines", {"m": 2}).presentation)
        )
        data_path = tmp_path / "sections.dk"
        data_path.write_text(SECTION_FILE)
        code, _, _ = run(
            capsys,
            ["sections", str(space_path), "--data", str(data_path), "--strict"],
        )
        assert code == 1

    def test_sections_on_catalog_reference(self, capsys, tmp_path):
        data_path = tmp_path / "sections.dk"
        data_path.write_text(SECTION_FILE)
        code, out, _ = run(
            capsys, ["sections", "catalog:wedge_lines", "--data", str(data_path)]
        )
        assert code == 0
        assert "section ok (tangent): valid" in out

    def test_sections_on_non_wedge_space_is_an_input_error(self, capsys, tmp_path):
        data_path = tmp_path / "sections.dk"
        data_path.write_text("section a : tangent on z2_quotient\non c : [s1, s2]\n")
        code, _, err = run(
            capsys, ["sections", "catalog:z2_quotient", "--data", str(data_path)]
        )
        assert code == 2
        assert "not wedge-type" in err


class TestCatalogCommand:
    def test_export_round_trips_every_entry(self, capsys):
        for name in catalog_names():
            code = run_command(["catalog", name, "--export"])
            out = capsys.readouterr().out
            assert code == 0
            entry = build_catalog_space(name)
            assert parse_presentation(out).presentation == entry.presentation

    def test_summary_lists_expected_values(self, capsys):
        code, out, _ = run(capsys, ["catalog", "z2_quotient"])
        assert code == 0
        assert "tangent_dim = 0" in out
        assert "t2_dim = 1" in out

    def test_exported_file_runs_through_commands(self, capsys, tmp_path):
        run_command(["catalog", "axes_subset", "--export"])
        text = capsys.readouterr().out
        path = tmp_path / "axes.dk"
        path.write_text(text)
        code, payload, _ = run_json(capsys, ["tangent", str(path)])
        assert code == 0
        assert payload["dim"] == 2


class TestErrorPaths:
    def test_missing_file_is_an_input_error(self, capsys):
        code, _, err = run(capsys, ["tangent", "no_such_file.dk"])
        assert code == 2
        assert "error:" in err

    def test_unknown_catalog_space(self, capsys):
        code, _, err = run(capsys, ["tangent", "catalog:torus"])
        assert code == 2
        assert "unknown catalog space" in err

    def test_parse_error_carries_position(self, capsys, tmp_path):
        path = tmp_path / "broken.dk"
        path.write_text("space demo\nchart x : R^\n")
        code, _, err = run(capsys, ["tangent", str(path)])
        assert code == 2
        assert "line 2" in err

    def test_bad_params_rejected(self, capsys):
        code, _, err = run(
            capsys, ["tangent", "catalog:spaghetti", "--params", "m=lots"]
        )
        assert code == 2

    def test_unknown_command_exits_two(self, capsys):
        assert run_command(["frobnicate"]) == 2

    def test_negative_rho_without_strict_is_zero(self, capsys):
        code, _, _ = run(capsys, ["rho", "catalog:z2_quotient", "--k", "2"])
        assert code == 0

    def test_negative_rho_with_strict_is_one(self, capsys):
        code, _, _ = run(capsys, ["rho", "catalog:z2_quotient", "--k", "2", "--strict"])
        assert code == 1

    def test_unknown_filteredness_is_reported_not_raised(self, capsys, tmp_path):
        path = tmp_path / "doubling.dk"
        path.write_text(
            "space doubling\nchart c : R^1\narrow dbl : c -> c = [2*s1]\n"
        )
        code, out, _ = run(capsys, ["filtered", str(path), "--depth", "3"])
        assert code == 0
        assert "weakly_filtered: unknown" in out
        assert "not reached" in out
