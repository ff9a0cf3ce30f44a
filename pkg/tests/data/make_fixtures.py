"""Deterministic fixture generator for the test suite.

Writes, next to itself:

    sample_orders.csv   small all-valid dataset for measure/round-trip tests
    study_fixture.csv   4 systems x >=15 orders; effort tracks EF with
                        bounded noise, so EF must out-correlate FP
    period_log.json     4 systems x 2 periods for the governance pipeline
    golden_study.json   committed output of `efmetrics evaluate` on the
                        study fixture (byte-compared by tests)
    golden_chart.svg    committed output of `efmetrics chart` on the log

Rerunning the script reproduces every byte (fixed seed, no timestamps).
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

from efmetrics.dataset import CSV_COLUMNS
from efmetrics.ef_metric import RequestOperation, ef_of_request
from efmetrics.fpa_core import AttributeCounts, FunctionType, fp_size, standard_tables
from efmetrics.nesma_pm import impact_percent

HERE = Path(__file__).parent
SEED = 60451


def _sample_attrs(rng: random.Random, ft: FunctionType) -> AttributeCounts:
    table = standard_tables()[ft]
    files_lo = table.file_ranges[0][0]
    files = rng.randint(files_lo, files_lo + 5)
    det_hi = 60 if ft in (FunctionType.ILF, FunctionType.EIF) else 30
    det = rng.randint(1, det_hi)
    return AttributeCounts(files, det)


def _perturb(rng: random.Random, ft: FunctionType, orig: AttributeCounts) -> AttributeCounts:
    files_lo = standard_tables()[ft].file_ranges[0][0]
    files = max(files_lo, orig.files + rng.choice((-1, 0, 0, 1)))
    det = max(1, orig.det + rng.choice((-3, -1, 0, 2, 4)))
    return AttributeCounts(files, det)


def _request_row(rng: random.Random, os_id: str, system: str, fn_id: str,
                 ft: FunctionType, op: RequestOperation) -> tuple[dict, float]:
    """One CSV row plus its EF contribution."""
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(OS=os_id, Function=fn_id, Type=ft.value, Operation=op.value, System=system)
    if op is RequestOperation.ALTER:
        orig = _sample_attrs(rng, ft)
        final = _perturb(rng, ft, orig)
        opa = AttributeCounts(
            abs(final.files - orig.files) + rng.randint(0, 1),
            abs(final.det - orig.det) + rng.randint(0, 2),
        )
        # keep the operation counts inside the final+original union bound
        opa = AttributeCounts(
            min(opa.files, final.files + orig.files),
            min(opa.det, final.det + orig.det),
        )
        pct = impact_percent(orig, opa)
        row.update(
            Final_FTR_RET=str(final.files), Final_DET=str(final.det),
            Operation_FTR_RET=str(opa.files), Operation_DET=str(opa.det),
            Original_FTR_RET=str(orig.files), Original_DET=str(orig.det),
            FP=str(fp_size(ft, final)), PctImpact=str(pct),
            PM=repr(fp_size(ft, orig) * pct / 100.0),
        )
        ef = ef_of_request(ft, op, final_attrs=final, op_attrs=opa)
    else:
        final = _sample_attrs(rng, ft)
        fp = fp_size(ft, final)
        row.update(Final_FTR_RET=str(final.files), Final_DET=str(final.det), FP=str(fp))
        row["PM"] = repr(float(fp)) if op is RequestOperation.INCLUDE else repr(fp * 0.25)
        ef = ef_of_request(ft, op, final_attrs=final)
    return row, ef.ef


def write_study_fixture(path: Path) -> None:
    rng = random.Random(SEED)
    systems = [("P", 20, True), ("Q", 18, True), ("R", 16, True), ("S", 15, False)]
    types_all = [FunctionType.EQ, FunctionType.EI, FunctionType.EO, FunctionType.ILF, FunctionType.EIF]
    types_txn = [FunctionType.EQ, FunctionType.EI, FunctionType.EO]
    ops = [RequestOperation.INCLUDE] * 11 + [RequestOperation.ALTER] * 7 + [RequestOperation.EXCLUDE] * 2
    rows = []
    fn_counter = 0
    for sys_idx, (system, n_os, with_files) in enumerate(systems, start=1):
        types = types_all if with_files else types_txn
        for i in range(n_os):
            os_id = str(sys_idx * 1000 + i + 1)
            ef_total = 0.0
            order_rows = []
            for _ in range(rng.randint(1, 4)):
                fn_counter += 1
                ft = rng.choice(types)
                op = rng.choice(ops)
                row, ef = _request_row(rng, os_id, system, f"F{fn_counter}", ft, op)
                order_rows.append(row)
                ef_total += ef
            # effort tracks EF with bounded multiplicative noise
            effort = 10.0 * ef_total * (1.0 + rng.uniform(-0.08, 0.08))
            team = rng.choice((2, 3))
            hours = round(effort / team, 2)
            for row in order_rows:
                row.update(Hours=repr(hours), Team=str(team))
            rows.extend(order_rows)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def write_sample_orders(path: Path) -> None:
    """Hand-picked rows covering all operations, both systems valid."""
    rows = [
        # OS 101: the canonical inclusion examples
        dict(OS="101", Function="F1", Type="EQ", Operation="I", Final_FTR_RET="1",
             Final_DET="5", FP="3", PM="3.0", System="ALPHA", Hours="12.5", Team="2"),
        dict(OS="101", Function="F2", Type="ILF", Operation="I", Final_FTR_RET="1",
             Final_DET="1", FP="7", PM="7.0", System="ALPHA", Hours="12.5", Team="2"),
        # OS 102: an alteration with operation/original attributes
        dict(OS="102", Function="F3", Type="EI", Operation="A", Final_FTR_RET="2",
             Operation_FTR_RET="1", Original_FTR_RET="2", Final_DET="10",
             Operation_DET="4", Original_DET="8", FP="4", PctImpact="50",
             PM="2.0", System="ALPHA", Hours="20.0", Team="3"),
        # OS 103: an exclusion
        dict(OS="103", Function="F4", Type="EO", Operation="E", Final_FTR_RET="1",
             Final_DET="4", FP="4", PM="1.0", System="ALPHA", Hours="4.0", Team="1"),
        # OS 201/202: second system
        dict(OS="201", Function="G1", Type="EIF", Operation="I", Final_FTR_RET="1",
             Final_DET="1", FP="5", PM="5.0", System="BETA", Hours="9.0", Team="2"),
        dict(OS="201", Function="G2", Type="EQ", Operation="A", Final_FTR_RET="3",
             Operation_FTR_RET="0", Original_FTR_RET="3", Final_DET="20",
             Operation_DET="0", Original_DET="20", FP="6", PctImpact="25",
             PM="1.5", System="BETA", Hours="9.0", Team="2"),
        dict(OS="202", Function="G3", Type="EO", Operation="I", Final_FTR_RET="5",
             Final_DET="33", FP="7", PM="7.0", System="BETA", Hours="15.0", Team="2"),
    ]
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row.get(c, "") for c in CSV_COLUMNS})


def write_period_log(path: Path) -> None:
    doc = {
        "periods": [
            {
                "system": "A", "period": "2024",
                "effort_mh": 310.0, "elapsed_hours": 1400.0, "failures": 4,
                "expected_benefit": 60000.0,
                "requests": [
                    {"function": "A.F1", "type": "EQ", "op": "I", "files": 1, "det": 5},
                    {"function": "A.F2", "type": "ILF", "op": "I", "files": 2, "det": 24},
                    {"function": "A.F3", "type": "EO", "op": "I", "files": 2, "det": 12},
                ],
            },
            {
                "system": "A", "period": "2025",
                "effort_mh": 280.0, "elapsed_hours": 1400.0, "failures": 2,
                "expected_benefit": 75000.0,
                "targets": {"production": 8.0},
                "benchmarks": {"productivity": 0.03},
                "requests": [
                    {"function": "A.F4", "type": "EI", "op": "I", "files": 2, "det": 10},
                    {"function": "A.F2", "type": "ILF", "op": "A", "files": 2, "det": 30,
                     "op_files": 0, "op_det": 6},
                ],
            },
            {
                "system": "B", "period": "2024",
                "effort_mh": 150.0, "elapsed_hours": 900.0, "failures": 9,
                "expected_benefit": 20000.0,
                "requests": [
                    {"function": "B.F1", "type": "EQ", "op": "I", "files": 2, "det": 8},
                    {"function": "B.F2", "type": "EIF", "op": "I", "files": 1, "det": 12},
                ],
            },
            {
                "system": "B", "period": "2025",
                "effort_mh": 170.0, "elapsed_hours": 900.0, "failures": 12,
                "expected_benefit": 21000.0,
                "targets": {"production": 6.0},
                "benchmarks": {"productivity": 0.03},
                "requests": [
                    {"function": "B.F2", "type": "EIF", "op": "E"},
                    {"function": "B.F3", "type": "EO", "op": "I", "files": 1, "det": 9},
                    {"function": "B.F1", "type": "EQ", "op": "A", "files": 2, "det": 10,
                     "op_files": 1, "op_det": 2},
                ],
            },
            {
                "system": "C", "period": "2024",
                "effort_mh": 95.0, "elapsed_hours": 700.0, "failures": 0,
                "expected_benefit": 12000.0,
                "requests": [
                    {"function": "C.F1", "type": "EI", "op": "I", "files": 1, "det": 7},
                ],
            },
            {
                # no effort booked: productivity must render as undefined
                "system": "C", "period": "2025",
                "effort_mh": 0.0, "elapsed_hours": 700.0, "failures": 3,
                "expected_benefit": 12500.0,
                "targets": {"production": 4.0},
                "requests": [
                    {"function": "C.F2", "type": "EQ", "op": "I", "files": 1, "det": 4},
                ],
            },
            {
                "system": "D", "period": "2024",
                "effort_mh": 420.0, "elapsed_hours": 1600.0, "failures": 7,
                "expected_benefit": 90000.0,
                "requests": [
                    {"function": "D.F1", "type": "ILF", "op": "I", "files": 3, "det": 35},
                    {"function": "D.F2", "type": "EO", "op": "I", "files": 3, "det": 16},
                    {"function": "D.F3", "type": "EQ", "op": "I", "files": 2, "det": 11},
                ],
            },
            {
                "system": "D", "period": "2025",
                "effort_mh": 400.0, "elapsed_hours": 1600.0, "failures": 5,
                "expected_benefit": 98000.0,
                "targets": {"production": 7.5},
                "benchmarks": {"productivity": 0.025},
                "requests": [
                    {"function": "D.F2", "type": "EO", "op": "A", "files": 3, "det": 18,
                     "op_files": 0, "op_det": 2},
                    {"function": "D.F4", "type": "EI", "op": "I", "files": 1, "det": 6},
                    {"function": "D.F3", "type": "EQ", "op": "E"},
                ],
            },
        ]
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def write_goldens() -> None:
    """Golden artifacts come from the CLI itself, then stay committed."""
    from efmetrics.cli import main

    rc = main([
        "evaluate", str(HERE / "study_fixture.csv"),
        "--out", str(HERE / "golden_study"),
    ])
    assert rc == 0, rc
    (HERE / "golden_study.txt").unlink()  # only the JSON golden is kept
    rc = main([
        "chart", str(HERE / "period_log.json"),
        "--period", "2025",
        "--out", str(HERE / "golden_chart.svg"),
    ])
    assert rc == 0, rc


def main() -> None:
    write_sample_orders(HERE / "sample_orders.csv")
    write_study_fixture(HERE / "study_fixture.csv")
    write_period_log(HERE / "period_log.json")
    write_goldens()
    print("fixtures written to", HERE)


if __name__ == "__main__":
    main()
