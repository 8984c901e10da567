# Copyright 2026 The qoedist Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import os
import pathlib

import pytest

import qoedist

SCENARIOS = pathlib.Path(
    os.environ.get("QOEDIST_SCENARIO_DIR",
                   pathlib.Path(__file__).resolve().parents[2] / "scenarios"))


def test_version():
    assert qoedist.__version__ == "0.1.0"


def test_special_functions():
    assert qoedist.log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-13)
    u = 2 * 0.3 - 1
    closed = (u * math.sqrt(1 - u * u) + math.asin(u) + math.pi / 2) / math.pi
    assert qoedist.reg_inc_beta(0.3, 1.5, 1.5) == pytest.approx(closed, abs=1e-13)


def test_beta_model():
    assert qoedist.beta_params(3.0, 0.25) == pytest.approx((1.5, 1.5))
    assert qoedist.beta_params(5.0, 0.3) == {"point_mass": 5}
    pmf = qoedist.beta_rating_pmf(3.0, 0.25)
    assert pmf == pytest.approx([0.0722, 0.2703, 0.3149, 0.2703, 0.0722], abs=1e-3)
    assert qoedist.beta_rating_cdf(3.0, 3.0, 0.25) == pytest.approx(0.5)
    assert qoedist.sos_std(3.0, 0.25) == pytest.approx(1.0)


def test_binomial_and_mappings():
    pmf = qoedist.binomial_rating_pmf(4 * math.log(2), 0.25)
    assert pmf == pytest.approx([1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16], abs=1e-15)
    assert qoedist.theta_for_binomial() == 0.25
    assert qoedist.iqx_mos(0.0) == 5.0
    assert qoedist.video_mos(0, 0.0) == 5.0
    mu, sigma = qoedist.lognormal_from_moments(4.0, 4.0)
    assert sigma == pytest.approx(math.sqrt(math.log(2)))


def test_web_fundamental_relationship():
    for std in (2.0, 4.0, 8.0):
        r = qoedist.web_qoe(4.0, std)
        assert sum(r["pmf"]) == pytest.approx(1.0, abs=1e-12)
        assert abs(r["metrics"]["mean"] - r["expected_mos"]) <= 1e-6


def test_video_three_atoms():
    r = qoedist.video_qoe([((0, 0), 0.5), ((1, 2), 0.3), ((4, 10), 0.2)], theta=0.3)
    assert r["cdf"][0] == pytest.approx(0.038961147842502222, abs=1e-12)
    assert r["cdf"][3] == pytest.approx(0.32779284350313164, abs=1e-12)
    m = qoedist.metrics(r["pmf"])
    assert m["gob"] == pytest.approx(1 - r["cdf"][2])


def test_scenarios(tmp_path):
    web = SCENARIOS / "web.json"
    report = qoedist.evaluate_scenario(str(web))
    assert report["fundamental_gap"] <= 1e-6
    files = qoedist.run_scenario(str(web), str(tmp_path / "run"))
    assert [pathlib.Path(f).name for f in files] == [
        "qoe_pmf.csv", "metrics.json", "qoe_cdf.csv"]
    sweep = qoedist.run_sweep(str(web), "qos.std", "2,4,8", str(tmp_path / "sweep"))
    rows = [l for l in pathlib.Path(sweep).read_text().splitlines()
            if not l.startswith("#")]
    assert len(rows) == 4


def test_errors_carry_kind_and_pointer(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rating_model": {"beta_approx": {}},'
                   ' "mapping": {"iqx": {"beta": 0.25}},'
                   ' "qos": {"lognormal": {"mean": 4, "std": 4}}}')
    with pytest.raises(qoedist.QoeError) as info:
        qoedist.evaluate_scenario(str(bad))
    message, kind, pointer = info.value.args
    assert kind == "schema"
    assert pointer == "/rating_model/beta_approx/theta"
    with pytest.raises(ValueError):
        qoedist.beta_rating_pmf(3.0, 1.5)
