import csv
import io
import math

import pytest

from ldgrd.cli import main
from ldgrd.study import (
    CSV_HEADER,
    ConvergenceRecord,
    StudyConfig,
    rate_p,
    rate_s,
    records_to_csv,
    records_to_table,
    run_study,
)


def test_rate_s_hand_values():
    # ln(25/11)/ln(2) evaluated by hand
    assert math.isclose(rate_s(0.25, 0.11), 1.1844245711374275, rel_tol=1e-12)
    assert rate_s(math.e, math.e) == 0.0
    assert math.isclose(rate_s(4.0, 1.0), 2.0, rel_tol=1e-15)


def test_rate_p_hand_values():
    # ln(25/11)/ln(2 ln32 / ln64)
    ref = math.log(0.25 / 0.11) / math.log(2.0 * math.log(32) / math.log(64))
    assert math.isclose(ref, 1.607, rel_tol=1e-3)
    assert math.isclose(rate_p(0.25, 0.11, 32), ref, rel_tol=1e-14)
    assert rate_p(1.0, 1.0, 128) == 0.0


def test_rate_p_definition_inversion():
    # error ratio (2 lnN / ln 2N)^{k+1} gives exactly k+1
    N, k = 64, 2
    factor = (2.0 * math.log(N) / math.log(2 * N)) ** (k + 1)
    assert math.isclose(rate_p(factor, 1.0, N), k + 1, rel_tol=1e-13)


def test_rates_reject_bad_input():
    with pytest.raises(ValueError):
        rate_s(0.0, 1.0)
    with pytest.raises(ValueError):
        rate_s(1.0, -1.0)
    with pytest.raises(ValueError):
        rate_p(1.0, 1.0, 1)


def test_config_validation():
    with pytest.raises(ValueError):
        StudyConfig(dim=3)
    with pytest.raises(ValueError):
        StudyConfig(n_list=())
    with pytest.raises(ValueError):
        StudyConfig(n_list=(12, 30))
    with pytest.raises(ValueError):
        StudyConfig(problem="nosuch")
    with pytest.raises(ValueError):
        StudyConfig(problem="layer2d", dim=1)
    with pytest.raises(ValueError):
        StudyConfig(flux="other")


def test_sigma_rule():
    cfg = StudyConfig(degrees=(1, 3), n_list=(8,))
    assert cfg.sigma_for(1) == 2.0
    assert cfg.sigma_for(3) == 4.0
    cfg2 = StudyConfig(degrees=(1,), n_list=(8,), sigma=2.5)
    assert cfg2.sigma_for(3) == 2.5


def test_run_study_attaches_rates_and_orders_records():
    cfg = StudyConfig(dim=1, degrees=(1,), eps_list=(1e-6,), n_list=(16, 8),
                      problem="layer1d")
    records = run_study(cfg)
    assert [r.N for r in records] == [8, 16]
    assert all(r.status == "ok" for r in records)
    first, second = records
    assert first.rs_balanced is not None and first.rp_balanced is not None
    assert second.rs_balanced is None  # no 2N partner
    assert math.isclose(
        first.rs_balanced,
        rate_s(first.report.err_balanced, second.report.err_balanced),
        rel_tol=1e-12,
    )


def test_run_study_records_case_failures_and_continues():
    # sigma=4 with eps=1e-2 pushes the transition point past 1/4 for N=8
    cfg = StudyConfig(dim=1, degrees=(3,), eps_list=(1e-2, 1e-6), n_list=(8,),
                      problem="layer1d")
    records = run_study(cfg)
    by_eps = {r.eps: r for r in records}
    assert by_eps[1e-2].status.startswith("error")
    assert by_eps[1e-2].report is None
    assert by_eps[1e-6].status == "ok"


def test_csv_schema_and_formatting():
    cfg = StudyConfig(dim=1, degrees=(1,), eps_list=(1e-6,), n_list=(8, 16),
                      problem="layer1d")
    records = run_study(cfg)
    text = records_to_csv(records)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 2
    assert rows[0]["dim"] == "1" and rows[0]["k"] == "1" and rows[0]["N"] == "8"
    assert rows[0]["status"] == "ok"
    float(rows[0]["err_balanced"])
    assert rows[1]["rs_balanced"] == ""  # final mesh has no rate
    # rates carry two decimals
    assert len(rows[0]["rs_balanced"].split(".")[1]) == 2


def test_csv_bit_stable():
    cfg = StudyConfig(dim=1, degrees=(1,), eps_list=(1e-8,), n_list=(8, 16),
                      problem="layer1d")
    t1 = records_to_csv(run_study(cfg))
    t2 = records_to_csv(run_study(cfg))
    assert t1 == t2


def test_table_output_mentions_each_block():
    cfg = StudyConfig(dim=1, degrees=(1,), eps_list=(1e-6, 1e-8), n_list=(8, 16),
                      problem="layer1d")
    text = records_to_table(run_study(cfg))
    assert "k = 1" in text
    assert "eps=1e-06" in text and "eps=1e-08" in text
    assert "err_B" in text


def test_failed_case_rows_keep_schema():
    rec = ConvergenceRecord(dim=1, k=1, sigma=2.0, eps=1e-2, N=8,
                            status="error: ValueError")
    text = records_to_csv([rec])
    row = next(csv.DictReader(io.StringIO(text)))
    assert row["err_balanced"] == ""
    assert row["status"].startswith("error")


def test_cli_csv_roundtrip(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["--dim", "1", "--degree", "1", "--eps", "1e-6", "--N", "8,16",
                 "--problem", "layer1d", "--format", "csv", "--out", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 2
    assert rows[0]["sigma"] == "2"


def test_cli_flux_and_sigma_flags(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["--degree", "1", "--eps", "1e-6", "--N", "8", "--sigma", "3",
                 "--flux", "classic", "--problem", "layer1d",
                 "--format", "csv", "--out", str(out)])
    assert code == 0
    row = next(csv.DictReader(out.open()))
    assert row["sigma"] == "3"


def test_cli_rejects_empty_n_list(capsys):
    code = main(["--N", "", "--eps", "1e-6"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_nonzero_exit_on_case_failure(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["--degree", "3", "--eps", "1e-2", "--N", "8",
                 "--problem", "layer1d", "--format", "csv", "--out", str(out)])
    assert code == 1
    assert "failed" in capsys.readouterr().err


def test_cli_table_to_stdout(capsys):
    code = main(["--degree", "1", "--eps", "1e-6", "--N", "8"])
    assert code == 0
    assert "k = 1" in capsys.readouterr().out


def test_balanced_rate_climbs_toward_optimal_order():
    cfg = StudyConfig(dim=1, degrees=(1,), eps_list=(1e-8,),
                      n_list=(64, 128, 256, 512, 1024), problem="layer1d")
    records = run_study(cfg)
    rates = [r.rp_balanced for r in records if r.rp_balanced is not None]
    assert len(rates) == 4
    for prev, nxt in zip(rates, rates[1:]):
        assert nxt >= prev - 0.05
    assert rates[-1] <= 1.0 + 1 + 0.05  # approaches k+1 from below


def test_package_export_surface():
    import ldgrd

    for name in ldgrd.__all__:
        assert getattr(ldgrd, name) is not None
    assert ldgrd.__version__
