"""Command-line pipeline: simulate, train, dist, infer, rank, overlap, report.

All stages share one work directory (``--dir``)::

    manifest.csv              subject_id,group,seed,file
    volumes/<id>.f32          little-endian float32, row-major V x T
    volumes/<id>.json         sidecar: V, T, width, height, subject_id, seed
    soms/<id>.som.json        k1, k2, weights (K x T), assignment (V)
    dist_<metric>_raw.csv     first line "# metric_name=... closed=..."
    dist_<metric>_closed.csv
    infer_<metric>.json       test record (two conditions, or omnibus F)
    null_<metric>.csv         permutation null, one value per line
    table_pairwise.csv        Bonferroni-corrected pairwise tests (3+ conditions)
    ranking_<group>.csv       units ordered by sample Jaccard index
    overlap.csv               reference-map overlap per ranked unit
    replicates/<cell>/rep_NNN.json, table.csv, table.txt   (report)

Options come from built-in defaults, then ``--config FILE`` (``key = value``
lines), then explicit flags. Each run writes its resolved options to
``config_<command>.txt``; ``dir`` and ``workers`` are left out so artifacts
do not depend on where or how wide a run was.

Exit status is 0 on success, 1 on a usage or configuration error and 2 on
a data error (missing, corrupt or invalid input).
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from pathlib import Path

import numpy as np

from .core import (Assignment, DistanceMatrix, GridSpec, GroupedSample, MetricKind, Som,
                   ValidationError, Volume)
from .inference import (bonferroni_adjust, f_statistic, group_stats, permutation_test,
                        restricted_frechet_mean)
from .jaccard import UnitRanking, overlap_report, sample_jaccard_index
from .metrics import metric_closure, pairwise_distances
from .pipeline import (ReplicateConfig, default_workers, derive_seed, run_replicates,
                       summarize, train_all)
from .synth import ScenarioSpec, generate_study
from .trainer import TrainingSchedule


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _opt_float(text):
    return None if str(text).lower() in ("", "none") else float(text)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _list(text):
    return tuple(x.strip() for x in str(text).split(",") if x.strip())


# key -> (parser, default, help)
OPTIONS = {
    "dir": (str, ".", "work directory"),
    "scenario": (_list, "SC1", "SC1, SC2 or SC3 (comma list for report)"),
    "snr": (_list, "2", "signal-to-noise ratio (comma list for report)"),
    "width": (int, 10, "image width"),
    "height": (int, 10, "image height"),
    "T": (int, 50, "time points"),
    "n_per_group": (int, 20, "subjects per group"),
    "block": (int, 5, "side of the square signal blocks"),
    "seed": (int, 0, "master seed"),
    "grid": (_list, "3x3", "map shape k1xk2 (comma list for report)"),
    "Gamma": (int, 100, "training iterations"),
    "sigma0": (_opt_float, None, "initial radius (default k1)"),
    "sigma_min": (float, 0.1, "radius floor"),
    "metric": (_list, "all", "t-smd, s-smd, st-smd or all"),
    "B": (int, 100, "permutations"),
    "statistic": (str, "t", "t or F"),
    "delta0": (float, 0.0, "null mean difference for t"),
    "add_one": (_bool, False, "use (1 + #) / (1 + B) p-values"),
    "alpha": (float, 0.05, "family-wise level for Bonferroni"),
    "reps": (int, 20, "replicates per report cell"),
    "workers": (int, None, "worker processes (default $SOMFRECHET_WORKERS or 1)"),
}
NOT_RECORDED = ("dir", "workers")

COMMAND_OPTIONS = {
    "simulate": ("scenario", "snr", "width", "height", "T", "n_per_group", "block", "seed"),
    "train": ("grid", "Gamma", "sigma0", "sigma_min", "seed", "workers"),
    "dist": ("metric",),
    "infer": ("metric", "B", "statistic", "delta0", "add_one", "alpha", "seed"),
    "rank": ("metric",),
    "overlap": (),
    "report": ("scenario", "snr", "grid", "n_per_group", "T", "block", "Gamma", "sigma0",
               "sigma_min", "metric", "B", "seed", "reps", "workers"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="somfrechet", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd, keys in COMMAND_OPTIONS.items():
        sp = sub.add_parser(cmd)
        sp.add_argument("--dir", default=argparse.SUPPRESS, help=OPTIONS["dir"][2])
        sp.add_argument("--config", help="key = value file")
        for key in keys:
            flags = sorted({"--" + key.replace("_", "-"), "--" + key.replace("_", "-").lower()})
            sp.add_argument(*flags, dest=key, default=argparse.SUPPRESS, help=OPTIONS[key][2])
        if cmd == "overlap":
            sp.add_argument("--ref", action="append", default=[], metavar="GROUP=PATH",
                            help="0/1 reference map for a condition (repeatable)")
    return p


def read_config_file(path) -> dict:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in OPTIONS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Defaults < config file < explicit flags, converted to typed values."""
    raw = {k: v[1] for k, v in OPTIONS.items()}
    if args.config:
        raw.update(read_config_file(args.config))
    raw.update({k: v for k, v in vars(args).items() if k in OPTIONS})
    cfg = {}
    for key, (conv, _, _) in OPTIONS.items():
        value = raw[key]
        try:
            cfg[key] = value if value is None else conv(value)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad value for {key}: {exc}") from None
    if cfg["workers"] is None:
        cfg["workers"] = default_workers()
    if cfg["workers"] < 1:
        raise UsageError("workers must be at least 1")
    cfg["dir"] = Path(cfg["dir"])
    return cfg


def _fmt(value) -> str:
    if isinstance(value, tuple):
        return ",".join(value)
    return "none" if value is None else str(value)


def write_config(cfg: dict, command: str):
    lines = [f"{k} = {_fmt(cfg[k])}" for k in OPTIONS if k not in NOT_RECORDED]
    _write_text(cfg["dir"] / f"config_{command}.txt", "\n".join(lines) + "\n")


def _single(cfg: dict, key: str) -> str:
    if len(cfg[key]) != 1:
        raise UsageError(f"{key} takes a single value here, got {','.join(cfg[key])}")
    return cfg[key][0]


def _metrics(cfg: dict) -> list[MetricKind]:
    names = cfg["metric"]
    if any(n.lower() == "all" for n in names):
        return list(MetricKind)
    try:
        return [MetricKind.parse(n) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _tag(kind: MetricKind) -> str:
    return kind.value.lower()


# ---------------------------------------------------------------- file formats

def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise DataError(f"{path}: file not found") from None
    except (OSError, ValueError) as exc:
        raise DataError(f"{path}: unreadable ({exc})") from None


def write_volume(directory: Path, volume: Volume, seed=None) -> str:
    """Store a volume as ``<id>.f32`` plus ``<id>.json``; returns the data file name."""
    directory.mkdir(parents=True, exist_ok=True)
    name = f"{volume.subject_id}.f32"
    np.asarray(volume.data, dtype="<f4").tofile(directory / name)
    meta = {"subject_id": volume.subject_id, "V": volume.V, "T": volume.T,
            "width": volume.width, "height": volume.height, "dtype": "<f4", "seed": seed}
    _write_text(directory / f"{volume.subject_id}.json", json.dumps(meta, indent=1) + "\n")
    return name


def read_volume(path: Path) -> Volume:
    path = Path(path)
    meta = _read_json(path.with_suffix(".json"))
    try:
        V, T = int(meta["V"]), int(meta["T"])
    except (KeyError, TypeError, ValueError):
        raise DataError(f"{path.with_suffix('.json')}: sidecar needs integer V and T") from None
    try:
        data = np.fromfile(path, dtype="<f4")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    if data.size != V * T:
        raise DataError(f"{path}: holds {data.size} values, sidecar says {V}x{T}")
    try:
        return Volume(data.reshape(V, T).astype(np.float64), meta.get("width"),
                      meta.get("height"), str(meta.get("subject_id", path.stem)))
    except ValidationError as exc:
        raise DataError(f"{path}: {exc}") from None


MANIFEST_FIELDS = ("subject_id", "group", "seed", "file")


def write_manifest(directory: Path, rows: list[dict]):
    lines = [",".join(MANIFEST_FIELDS)]
    lines += [",".join(str(r[f]) for f in MANIFEST_FIELDS) for r in rows]
    _write_text(directory / "manifest.csv", "\n".join(lines) + "\n")


def read_manifest(directory: Path) -> list[dict]:
    path = directory / "manifest.csv"
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except FileNotFoundError:
        raise DataError(f"{path}: file not found") from None
    if not rows:
        raise DataError(f"{path}: no subjects listed")
    missing = set(MANIFEST_FIELDS) - set(rows[0])
    if missing:
        raise DataError(f"{path}: missing columns {sorted(missing)}")
    ids = [r["subject_id"] for r in rows]
    if len(set(ids)) != len(ids):
        raise DataError(f"{path}: duplicate subject ids")
    return rows


def _groups(rows: list[dict]) -> GroupedSample:
    names = sorted({r["group"] for r in rows})
    return GroupedSample(np.array([names.index(r["group"]) for r in rows]), tuple(names))


def som_to_json(som: Som, subject_id: str) -> str:
    doc = {"subject_id": subject_id, "k1": som.grid.k1, "k2": som.grid.k2,
           "weights": som.weights.tolist(), "assignment": som.assignment.bmu_of.tolist()}
    return json.dumps(doc) + "\n"


def read_som(path: Path) -> Som:
    doc = _read_json(path)
    try:
        grid = GridSpec(int(doc["k1"]), int(doc["k2"]))
        return Som(grid, np.asarray(doc["weights"], dtype=float),
                   Assignment(np.asarray(doc["assignment"]), grid.K))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: invalid SOM ({exc})") from None


def write_distance_csv(path: Path, D: DistanceMatrix):
    ids = D.ids if D.ids is not None else tuple(str(i) for i in range(D.n))
    lines = [f"# metric_name={D.metric_name} closed={str(D.closed).lower()}",
             ",".join(("id",) + ids)]
    for i, row in zip(ids, D.values):
        lines.append(",".join([i] + [repr(float(x)) for x in row]))
    _write_text(path, "\n".join(lines) + "\n")


def read_distance_csv(path: Path) -> DistanceMatrix:
    try:
        lines = path.read_text().splitlines()
    except FileNotFoundError:
        raise DataError(f"{path}: file not found") from None
    try:
        head = dict(kv.split("=", 1) for kv in lines[0].lstrip("#").split())
        ids = lines[1].split(",")[1:]
        body = [ln.split(",") for ln in lines[2:] if ln]
        values = np.array([[float(x) for x in r[1:]] for r in body])
        if [r[0] for r in body] != ids:
            raise ValueError("row ids differ from header ids")
        return DistanceMatrix(values, head["metric_name"], head["closed"] == "true", ids)
    except (IndexError, KeyError, ValueError) as exc:
        raise DataError(f"{path}: corrupt distance matrix ({exc})") from None


def _csv_text(header, rows) -> str:
    lines = [",".join(header)] + [",".join(str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def cmd_simulate(cfg):
    try:
        spec = ScenarioSpec(_single(cfg, "scenario"), float(_single(cfg, "snr")), cfg["width"],
                            cfg["height"], cfg["T"], cfg["n_per_group"], cfg["seed"],
                            cfg["block"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    study = generate_study(spec)
    rows = []
    for vol, group in zip(study.volumes, study.groups):
        name = write_volume(cfg["dir"] / "volumes", vol, spec.seed)
        rows.append({"subject_id": vol.subject_id, "group": group, "seed": spec.seed,
                     "file": f"volumes/{name}"})
    write_manifest(cfg["dir"], rows)
    return f"wrote {len(rows)} volumes"


def _load_volumes(cfg, rows):
    return [read_volume(cfg["dir"] / r["file"]) for r in rows]


def cmd_train(cfg):
    rows = read_manifest(cfg["dir"])
    volumes = _load_volumes(cfg, rows)
    try:
        grid = GridSpec.parse(_single(cfg, "grid"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        schedule = TrainingSchedule(cfg["Gamma"], cfg["sigma0"], cfg["sigma_min"],
                                    seed=cfg["seed"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    soms = train_all(volumes, grid, schedule, cfg["workers"])
    for r, som in zip(rows, soms):
        _write_text(cfg["dir"] / "soms" / f"{r['subject_id']}.som.json",
                    som_to_json(som, r["subject_id"]))
    return f"trained {len(soms)} {grid} maps"


def _load_soms(cfg, rows):
    return [read_som(cfg["dir"] / "soms" / f"{r['subject_id']}.som.json") for r in rows]


def cmd_dist(cfg):
    rows = read_manifest(cfg["dir"])
    soms = _load_soms(cfg, rows)
    ids = [r["subject_id"] for r in rows]
    for kind in _metrics(cfg):
        raw = pairwise_distances(soms, kind, ids)
        write_distance_csv(cfg["dir"] / f"dist_{_tag(kind)}_raw.csv", raw)
        write_distance_csv(cfg["dir"] / f"dist_{_tag(kind)}_closed.csv", metric_closure(raw))
    return f"wrote distances for {len(ids)} maps"


def _closed_matrix(cfg, kind, rows) -> DistanceMatrix:
    path = cfg["dir"] / f"dist_{_tag(kind)}_closed.csv"
    D = read_distance_csv(path)
    if list(D.ids) != [r["subject_id"] for r in rows]:
        raise DataError(f"{path}: subject ids do not match manifest.csv")
    return D


def _result_doc(res, groups: GroupedSample, stats=None) -> dict:
    doc = {"metric": res.metric_name, "statistic_kind": res.statistic_kind,
           "statistic": res.statistic, "p_value": res.p_value, "B": res.B, "seed": res.seed,
           "delta0": res.delta0, "add_one": res.add_one,
           "groups": list(groups.names), "group_sizes": groups.group_sizes.tolist()}
    if stats is not None:
        doc["mean_index"] = list(stats.mean_index)
        doc["variance"] = [None if np.isnan(v) else v for v in stats.variance]
    return doc


def _write_null(path: Path, null):
    _write_text(path, "null\n" + "".join(f"{float(x)!r}\n" for x in null))


def cmd_infer(cfg):
    rows = read_manifest(cfg["dir"])
    groups = _groups(rows)
    if groups.J < 2:
        raise DataError("manifest.csv lists a single condition; nothing to compare")
    stat = cfg["statistic"].lower()
    if stat not in ("t", "f"):
        raise UsageError(f"statistic must be t or F, got {cfg['statistic']!r}")
    metrics = _metrics(cfg)
    pairs = list(itertools.combinations(range(groups.J), 2))
    table = []
    for mi, kind in enumerate(metrics):
        D = _closed_matrix(cfg, kind, rows)
        overall = "f" if groups.J > 2 else stat
        res = permutation_test(D, groups, cfg["B"], derive_seed(cfg["seed"], mi), overall,
                               cfg["delta0"], add_one=cfg["add_one"])
        doc = _result_doc(res, groups, group_stats(D, groups) if overall == "t" else None)
        if overall == "f":
            F = f_statistic(D, groups)
            doc.update(ss_between=F.ss_between, ss_within=F.ss_within,
                       grand_mean_index=F.grand_mean_index, mean_index=list(F.group_means))
        _write_text(cfg["dir"] / f"infer_{_tag(kind)}.json", json.dumps(doc, indent=1) + "\n")
        _write_null(cfg["dir"] / f"null_{_tag(kind)}.csv", res.null_distribution)
        if groups.J > 2:
            ps, stats = [], []
            for pi, (a, b) in enumerate(pairs):
                idx = np.concatenate([groups.members(a), groups.members(b)])
                sub = DistanceMatrix(D.values[np.ix_(idx, idx)], D.metric_name, True)
                g2 = GroupedSample.from_sizes([groups.members(a).size, groups.members(b).size])
                r = permutation_test(sub, g2, cfg["B"], derive_seed(cfg["seed"], mi, pi + 1),
                                     "t", cfg["delta0"], add_one=cfg["add_one"])
                ps.append(r.p_value)
                stats.append(r.statistic)
            bon = bonferroni_adjust(ps, cfg["alpha"])
            for (a, b), t, p, sig in zip(pairs, stats, ps, bon.significant):
                table.append((f"{groups.name(a)} vs {groups.name(b)}", kind.value, repr(t),
                              repr(p), repr(bon.threshold), str(sig).lower()))
    if groups.J > 2:
        _write_text(cfg["dir"] / "table_pairwise.csv", _csv_text(
            ("comparison", "metric", "statistic", "p_value", "threshold", "significant"),
            table))
        return f"wrote {len(table)} pairwise tests"
    return f"tested {len(metrics)} metrics"


def cmd_rank(cfg):
    rows = read_manifest(cfg["dir"])
    groups = _groups(rows)
    volumes = _load_volumes(cfg, rows)
    soms = _load_soms(cfg, rows)
    kind = _metrics(cfg)[0]
    D = _closed_matrix(cfg, kind, rows)
    means = {}
    for j in range(groups.J):
        m = groups.members(j)
        mu = restricted_frechet_mean(D, m)
        ranking = sample_jaccard_index(soms[mu], [volumes[i] for i in m])
        name = groups.name(j)
        means[name] = {"metric": kind.value, "subject_id": rows[mu]["subject_id"],
                       "index": mu}
        grid = soms[mu].grid
        body = [(r + 1, k, *grid.coord(k), repr(float(ranking.values[k])))
                for r, k in enumerate(ranking.order.tolist())]
        _write_text(cfg["dir"] / f"ranking_{name}.csv",
                    _csv_text(("rank", "unit", "row", "col", "jaccard"), body))
    _write_text(cfg["dir"] / "means.json", json.dumps(means, indent=1) + "\n")
    return f"ranked units for {groups.J} conditions"


def _read_reference(path: Path, V: int) -> np.ndarray:
    try:
        tokens = path.read_text().split()
    except FileNotFoundError:
        raise DataError(f"{path}: file not found") from None
    if any(t not in ("0", "1") for t in tokens):
        raise DataError(f"{path}: reference map must contain only 0 and 1")
    if len(tokens) != V:
        raise DataError(f"{path}: {len(tokens)} entries, expected {V}")
    return np.array([t == "1" for t in tokens])


def _read_ranking(path: Path) -> UnitRanking:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        order = np.array([int(r["unit"]) for r in rows])
        values = np.empty(len(rows))
        values[order] = [float(r["jaccard"]) for r in rows]
    except FileNotFoundError:
        raise DataError(f"{path}: file not found (run rank first)") from None
    except (KeyError, ValueError, IndexError) as exc:
        raise DataError(f"{path}: corrupt ranking ({exc})") from None
    return UnitRanking(values, order)


def cmd_overlap(cfg, refs):
    if not refs:
        raise UsageError("overlap needs at least one --ref GROUP=PATH")
    means = _read_json(cfg["dir"] / "means.json")
    columns = []
    for spec in refs:
        if "=" not in spec:
            raise UsageError(f"--ref expects GROUP=PATH, got {spec!r}")
        group, path = spec.split("=", 1)
        if group not in means:
            raise DataError(f"no mean map for condition {group!r} in means.json")
        som = read_som(cfg["dir"] / "soms" / f"{means[group]['subject_id']}.som.json")
        ranking = _read_ranking(cfg["dir"] / f"ranking_{group}.csv")
        if ranking.order.size != som.K:
            raise DataError(f"ranking_{group}.csv does not match the mean map")
        columns.append((group, overlap_report(som, ranking, _read_reference(Path(path), som.V))))
    header = ["rank"]
    for g, _ in columns:
        header += [f"{g}_unit", f"{g}_fraction"]
    body = []
    for r in range(len(columns[0][1])):
        row = [r + 1]
        for _, rep in columns:
            row += [rep[r][0], repr(float(rep[r][1]))] if r < len(rep) else ["", ""]
        body.append(row)
    _write_text(cfg["dir"] / "overlap.csv", _csv_text(header, body))
    return f"wrote overlap for {len(columns)} conditions"


def _read_replicates(root: Path) -> list[dict]:
    records = []
    for path in sorted(root.glob("*/rep_*.json")):
        records.append(_read_json(path))
    return records


def cmd_report(cfg):
    root = cfg["dir"] / "replicates"
    metrics = tuple(k.value for k in _metrics(cfg))
    cells = []
    for sc, snr, grid in itertools.product(cfg["scenario"], cfg["snr"], cfg["grid"]):
        try:
            rc = ReplicateConfig(sc.upper(), float(snr), grid, cfg["n_per_group"], cfg["T"],
                                 cfg["Gamma"], cfg["sigma0"], cfg["sigma_min"], cfg["B"],
                                 cfg["seed"], cfg["block"], metrics)
            rc.replicate_seed(0)
            ScenarioSpec(rc.scenario, rc.snr, T=rc.T, n_per_group=rc.n_per_group, block=rc.block)
            TrainingSchedule(rc.Gamma, rc.sigma0, rc.sigma_min)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        cells.append(rc)
    for rc in cells:
        todo = [r for r in range(cfg["reps"])
                if not (root / rc.cell() / f"rep_{r:03d}.json").exists()]
        for rec in run_replicates(rc, todo, cfg["workers"]):
            _write_text(root / rc.cell() / f"rep_{rec['replicate']:03d}.json",
                        json.dumps(rec, indent=1) + "\n")
    records = _read_replicates(root)
    if not records:
        raise DataError(f"{root}: no replicate results to aggregate")
    by_cell: dict[str, list] = {}
    for rec in records:
        by_cell.setdefault(rec["cell"], []).append(rec)
    rows, text = [], []
    all_metrics = sorted({m for rec in records for m in rec["p_values"]},
                         key=lambda m: [k.value for k in MetricKind].index(m))
    text.append("cell".ljust(28) + "".join(m.rjust(18) for m in all_metrics))
    for cell in sorted(by_cell):
        recs = by_cell[cell]
        summary = summarize(recs)
        line = cell.ljust(28)
        for m in all_metrics:
            if m in summary:
                mean, sd, n = summary[m]
                rows.append((cell, recs[0]["scenario"], recs[0]["snr"], recs[0]["grid"], m,
                             repr(mean), repr(sd), n))
                line += f"{mean:.3f} ± {sd:.3f}".rjust(18)
            else:
                line += "-".rjust(18)
        text.append(line)
    _write_text(cfg["dir"] / "table.csv", _csv_text(
        ("cell", "scenario", "snr", "grid", "metric", "mean_p", "sd_p", "n"), rows))
    _write_text(cfg["dir"] / "table.txt", "\n".join(text) + "\n")
    return "\n".join(text)


COMMANDS = {"simulate": cmd_simulate, "train": cmd_train, "dist": cmd_dist,
            "infer": cmd_infer, "rank": cmd_rank, "report": cmd_report}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args.command, args)
        if args.command == "overlap":
            msg = cmd_overlap(cfg, args.ref)
        else:
            msg = COMMANDS[args.command](cfg)
        write_config(cfg, args.command)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, ValidationError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2
    print(msg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
