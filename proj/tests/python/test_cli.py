import json
import os
import subprocess

import pytest

CLI = os.environ.get("ALPHAIOU_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="ALPHAIOU_CLI not set")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def write_annotations(path, boxes):
    path.write_text(
        json.dumps(
            {
                "images": [{"id": i, "width": 100, "height": 100} for i in range(1, 11)],
                "annotations": [
                    {"image_id": img, "category_id": 1, "bbox": bbox} for img, bbox in boxes
                ],
            }
        )
    )


@pytest.fixture
def dataset(tmp_path):
    # ten images, four interior boxes each
    boxes = []
    for img in range(1, 11):
        for k in range(4):
            x = 12 + 18 * k
            y = 15 + 7 * (img % 4)
            boxes.append((img, [x, y, 14 + k, 18 + img % 3]))
    path = tmp_path / "annotations.json"
    write_annotations(path, boxes)
    return path


def test_version_and_usage():
    assert run("--version").returncode == 0
    assert run("--help").returncode == 0

    bad = run("no-such-command")
    assert bad.returncode == 2

    missing = run()
    assert missing.returncode == 2


def test_loss_curve_cardinality(tmp_path):
    out = tmp_path / "curve.csv"
    res = run("loss-curve", "--alphas", "0.5,1,2,3", "--points", "101", "--out", str(out))
    assert res.returncode == 0, res.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "iou,alpha,loss,grad_mag"
    assert len(lines) == 1 + 4 * 101

    # stdout by default, loss values follow 1 - iou^alpha
    res = run("loss-curve", "--alphas", "2", "--points", "3")
    rows = [line.split(",") for line in res.stdout.strip().splitlines()[1:]]
    assert [float(r[0]) for r in rows] == [0.0, 0.5, 1.0]
    assert [float(r[2]) for r in rows] == pytest.approx([1.0, 0.75, 0.0])

    assert run("loss-curve", "--kind", "alpha-giou").returncode == 2  # not a 1-d family
    assert run("loss-curve", "--alphas", "99").returncode == 2  # out of range


def test_check_grad_json():
    res = run("check-grad", "--samples", "100", "--seed", "11")
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["n_checked"] == 100
    assert report["max_rel_err"] < 1e-6
    assert set(report["worst_case"]) == {"kind", "alpha1", "alpha2", "pred", "gt"}

    again = run("check-grad", "--samples", "100", "--seed", "11")
    assert again.stdout == res.stdout  # seeded, fully deterministic


def test_regress_trajectories(tmp_path):
    out = tmp_path / "traj.csv"
    res = run(
        "regress", "--kind", "alpha-iou", "--alphas", "1,3",
        "--init", "0.55,0.54,0.3,0.5", "--gt", "0.5,0.5,0.4,0.4",
        "--lr", "0.001", "--steps", "200", "--out", str(out),
    )
    assert res.returncode == 0, res.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "step,alpha,iou,loss,grad_norm"
    assert len(lines) == 1 + 2 * 201

    # alpha=3 reaches IoU 0.95 in fewer steps than alpha=1
    reached = {}
    for line in lines[1:]:
        step, alpha, iou_val = line.split(",")[:3]
        if float(iou_val) >= 0.95 and float(alpha) not in reached:
            reached[float(alpha)] = int(step)
    assert reached[3.0] < reached[1.0]

    assert run("regress", "--init", "not-a-box").returncode == 2
    assert run("regress", "--init", "0.5,0.5,-1,0.4").returncode == 2


def test_perturb_then_eval_degradation(dataset, tmp_path):
    noisy = tmp_path / "noisy.json"
    res = run("perturb", "--in", str(dataset), "--out", str(noisy),
              "--eta", "0.3", "--seed", "1")
    assert res.returncode == 0, res.stderr
    assert res.stdout.startswith("mean_iou ")
    mean_iou = float(res.stdout.split()[1])
    assert 0.3 < mean_iou < 0.8

    # same seed reproduces the file bit for bit
    noisy2 = tmp_path / "noisy2.json"
    run("perturb", "--in", str(dataset), "--out", str(noisy2), "--eta", "0.3", "--seed", "1")
    assert noisy.read_text() == noisy2.read_text()

    # noisy annotations act as pseudo-detections with score 1.0: localization
    # error shows as a steep AP drop across thresholds
    res = run("eval", "--gt", str(dataset), "--dets", str(noisy),
              "--thresholds", "0.5:0.95:0.05")
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    ap = report["ap_per_threshold"]
    assert ap["0.5"] > ap["0.9"]
    assert ap["0.5"] > 0.2
    assert report["map_50_95"] < 1.0


def test_eval_perfect_detections(dataset, tmp_path):
    res = run("eval", "--gt", str(dataset), "--dets", str(dataset),
              "--thresholds", "0.5:0.95:0.05", "--hist-csv", str(tmp_path / "hist.csv"))
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["map_50_95"] == 1.0
    assert report["map_75_95"] == 1.0
    hist_lines = (tmp_path / "hist.csv").read_text().strip().splitlines()
    assert hist_lines[0] == "bucket,count"
    assert len(hist_lines) == 6
    assert hist_lines[-1] == "0.9,40"


def test_eval_threshold_forms(dataset):
    single = run("eval", "--gt", str(dataset), "--dets", str(dataset), "--thresholds", "0.75")
    report = json.loads(single.stdout)
    assert report["ap_per_threshold"] == {"0.75": 1.0}
    assert report["map_50_95"] is None  # NaN: the full sweep was not evaluated

    assert run("eval", "--gt", str(dataset), "--dets", str(dataset),
               "--thresholds", "nonsense").returncode == 2


def test_runtime_errors_exit_1(dataset, tmp_path):
    res = run("eval", "--gt", str(tmp_path / "absent.json"), "--dets", str(dataset))
    assert res.returncode == 1
    assert res.stderr.startswith("error:")

    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    res = run("perturb", "--in", str(bad), "--out", str(tmp_path / "x.json"))
    assert res.returncode == 1
    assert "error:" in res.stderr
