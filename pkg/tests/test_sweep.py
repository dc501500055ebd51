import numpy as np
import pytest

from magmech.sweep import (AMPLITUDE_COLUMNS, E_COLUMNS, MEASURE_COLUMNS,
                           ST_COLUMNS, SweepAxis, SweepSpec,
                           build_point_params, evaluate_point, figure_preset,
                           find_critical_temperature, grid_values,
                           normalize_quantities, render_records, run_sweep)


def small_spec(baseline, **kwargs):
    defaults = dict(
        base=baseline,
        axes=(SweepAxis("J", 1.5 * baseline.kappa_1,
                        2.5 * baseline.kappa_1, 3),),
        quantities=("E_a2m", "st_a2_to_m"),
    )
    defaults.update(kwargs)
    return SweepSpec(**defaults)


def test_quantities_normalization():
    cols, amp = normalize_quantities(("all",))
    assert cols == MEASURE_COLUMNS
    assert not amp
    cols, amp = normalize_quantities(("st_a2_to_m", "amplitudes"))
    assert cols == ("E_a2m", "st_a2_to_m")
    assert amp
    cols, _ = normalize_quantities(("margin", "E_a1b"))
    assert cols == ("E_a1b",)
    with pytest.raises(ValueError):
        normalize_quantities(("E_zz",))


def test_axis_validation(baseline):
    with pytest.raises(ValueError):
        SweepAxis("not_a_field", 0.0, 1.0, 5)
    with pytest.raises(ValueError):
        SweepAxis("J", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepSpec(base=baseline, axes=())
    with pytest.raises(ValueError):
        small_spec(baseline, links=(("nope", "Delta_1", 1.0),))


def test_quiet_passive_point_has_no_correlations(baseline):
    params = baseline.with_(J=0.0, g_ma=0.0, G_mb=0.0, gain_g=0.0,
                            temperature_T=0.0)
    rec = evaluate_point(params)
    assert rec.stable
    for col in E_COLUMNS:
        assert rec.measures[col] == 0.0
    for col in ST_COLUMNS:
        assert rec.measures[col] == 0.0
    assert rec.physicality > -1e-9


def test_baseline_point_distant_beats_near(baseline):
    rec = evaluate_point(baseline)
    assert rec.stable
    assert rec.measures["E_a2m"] > rec.measures["E_a1m"] > 0.0
    assert rec.lyap_residual < 1e-10
    assert any("negative diffusion" in w for w in rec.warnings)


def test_isolated_active_cavity_is_masked(baseline):
    rec = evaluate_point(baseline.with_(J=0.0))
    assert not rec.stable
    assert rec.margin > 0
    assert all(v is None for v in rec.measures.values())
    assert rec.physicality is None


def test_unphysical_pair_nulls_both_measure_kinds(baseline):
    # stable point in the indefinite-noise regime whose reduced (a2, m)
    # state has a complex partially-transposed symplectic spectrum:
    # neither entanglement nor steering may be reported for the pair
    params = baseline.with_(Delta_1=-0.12 * baseline.omega_b,
                            Delta_2=-0.12 * baseline.omega_b,
                            Delta_m=0.72 * baseline.omega_b)
    rec = evaluate_point(params, quantities=("st_a2_to_m", "st_m_to_a2"))
    assert rec.stable
    assert rec.measures["E_a2m"] is None
    assert rec.measures["st_a2_to_m"] is None
    assert rec.measures["st_m_to_a2"] is None
    assert any(w.startswith("pair a2-m") for w in rec.warnings)


def test_duplicated_point_grid_is_deterministic(baseline):
    spec = small_spec(baseline, axes=(
        SweepAxis("J", 2.0 * baseline.kappa_1, 2.0 * baseline.kappa_1, 2),))
    records = run_sweep(spec)
    assert len(records) == 2
    assert records[0].measures == records[1].measures
    assert records[0].axis_values == records[1].axis_values


def test_grid_row_major_order(baseline):
    spec = small_spec(baseline, axes=(
        SweepAxis("J", 1.0, 2.0, 2), SweepAxis("g_ma", 5.0, 7.0, 3)))
    values = grid_values(spec)
    assert values == [(1.0, 5.0), (1.0, 6.0), (1.0, 7.0),
                      (2.0, 5.0), (2.0, 6.0), (2.0, 7.0)]


def test_links_and_eta_axis(baseline):
    spec = SweepSpec(
        base=baseline,
        axes=(SweepAxis("Delta_1", -1.0 * baseline.omega_b, 0.0, 3),
              SweepAxis("eta", -0.5, 0.5, 3)),
        links=(("Delta_2", "Delta_1", -1.0),),
        quantities=("E_a2m",),
    )
    params = build_point_params(spec, (-0.4 * baseline.omega_b, -0.5))
    assert params.Delta_1 == pytest.approx(-0.4 * baseline.omega_b)
    assert params.Delta_2 == pytest.approx(0.4 * baseline.omega_b)
    assert params.gain_g == pytest.approx(
        baseline.kappa_2 + 0.5 * baseline.kappa_1)


def test_out_of_range_axis_points_are_flagged_not_fatal(baseline):
    # eta beyond kappa_2/kappa_1 would need negative gain; those grid
    # points must be flagged per-point, not abort the sweep
    spec = SweepSpec(base=baseline, axes=(SweepAxis("eta", 0.5, 1.5, 3),),
                     quantities=("E_a2m",))
    records = run_sweep(spec)
    assert len(records) == 3
    assert records[0].stable
    assert not records[2].stable
    assert any("invalid parameters" in w for w in records[2].warnings)


def test_serial_and_parallel_runs_are_identical(baseline):
    spec = small_spec(baseline)
    serial = run_sweep(spec, jobs=1)
    parallel = run_sweep(spec, jobs=2)
    assert len(serial) == len(parallel)
    for a, b in zip(serial, parallel):
        assert a.axis_values == b.axis_values
        assert a.measures == b.measures
        assert a.margin == b.margin


def test_csv_rendering(baseline):
    spec = small_spec(baseline)
    records = run_sweep(spec)
    text = render_records(records, spec)
    lines = text.strip().split("\n")
    assert len(lines) == 1 + len(records)
    header = lines[0].split(",")
    assert header[0] == "J"
    assert header[1] == "stable"
    assert header[-1] == "warnings"
    for col in MEASURE_COLUMNS:
        assert col in header
    # deterministic rendering
    assert text == render_records(records, spec)


def test_csv_unstable_rows_have_empty_measures(baseline):
    spec = SweepSpec(
        base=baseline.with_(J=0.0),
        axes=(SweepAxis("Delta_1", -baseline.omega_b, 0.0, 2),),
        quantities=("E_a2m",),
    )
    records = run_sweep(spec)
    assert all(not r.stable for r in records)
    text = render_records(records, spec)
    row = text.strip().split("\n")[1].split(",")
    header = text.strip().split("\n")[0].split(",")
    e_index = header.index("E_a2m")
    assert row[e_index] == ""
    assert row[header.index("stable")] == "false"


def test_jsonl_rendering(baseline):
    import json

    spec = small_spec(baseline, output_format="jsonl")
    records = run_sweep(spec)
    text = render_records(records, spec)
    lines = text.strip().split("\n")
    assert len(lines) == len(records)
    parsed = json.loads(lines[0])
    assert "measures" in parsed and "axes" in parsed


def test_amplitude_columns(baseline):
    spec = small_spec(baseline, quantities=("E_a2m", "amplitudes"))
    records = run_sweep(spec)
    text = render_records(records, spec)
    header = text.strip().split("\n")[0].split(",")
    for col in AMPLITUDE_COLUMNS:
        assert col in header


def test_critical_temperature_against_linear_scan(baseline):
    tc, warnings = find_critical_temperature(baseline, ("a2", "m"),
                                             t_max=0.5, coarse_points=26)
    # brute-force scan oracle
    temps = np.linspace(0.0, 0.5, 1001)
    scan_tc = 0.0
    for t in temps:
        rec = evaluate_point(baseline.with_(temperature_T=t),
                             quantities=("E_a2m",))
        value = rec.measures["E_a2m"] if rec.stable else None
        if value is not None and value > 1e-6:
            scan_tc = t
        else:
            break
    assert tc == pytest.approx(scan_tc, abs=2e-3)
    assert not warnings


def test_critical_temperature_requires_entanglement_at_zero(baseline):
    with pytest.raises(ValueError):
        find_critical_temperature(baseline, ("a1", "a2"), t_max=0.5,
                                  coarse_points=11)


def test_figure_presets_match_captions():
    spec = figure_preset("fig2a")
    assert spec.axes[0].name == "Delta_1"
    assert spec.axes[0].start == pytest.approx(-2 * spec.base.omega_b)
    assert spec.axes[0].stop == 0.0
    assert spec.axes[1].name == "eta"
    assert (spec.axes[1].start, spec.axes[1].stop) == (-1.0, 1.0)
    assert spec.base.Delta_m == pytest.approx(0.9 * spec.base.omega_b)
    assert spec.base.temperature_T == 0.015
    assert ("Delta_2", "Delta_1", 1.0) in spec.links

    fig3 = figure_preset("fig3")
    assert set(fig3.quantities) == {"st_a2_to_m", "st_m_to_a2"}
    assert fig3.base.gain_g == pytest.approx(1.5 * fig3.base.kappa_1)

    fig4c = figure_preset("fig4c")
    assert fig4c.axes[0].name == "G_mb"

    fig5b = figure_preset("fig5b")
    assert fig5b.base.Delta_1 == pytest.approx(0.06 * fig5b.base.omega_b)
    assert fig5b.base.Delta_m == pytest.approx(0.375 * fig5b.base.omega_b)
    assert ("Delta_2", "Delta_1", -1.0) in fig5b.links

    with pytest.raises(ValueError):
        figure_preset("fig99")


def test_fig4a_grid_is_denser():
    assert figure_preset("fig4a").axes[0].count == 401
    assert figure_preset("fig4b").axes[0].count == 201
