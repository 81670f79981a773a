import base64
import concurrent.futures
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from weakgrow import imageio
from weakgrow.phantom import PhantomParams, make_phantom
from weakgrow.service import MAX_BODY_BYTES, create_app
from weakgrow.weaklabel import serialize_weak_labels


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def phantom_payload():
    ph = make_phantom(PhantomParams(kind="horn", seed=21, size=96))
    return {
        "image": base64.b64encode(imageio.encode_gray_png(ph.image)).decode(),
        "labels": json.loads(serialize_weak_labels(ph.labels)),
        "reference": base64.b64encode(imageio.encode_mask_png(ph.truth)).decode(),
    }


def decode_mask(b64):
    return imageio.decode_gray(base64.b64decode(b64)) > 0


class TestHealth:
    def test_reports_defaults(self, client):
        body = client.get("/v1/health").json()
        assert body["status"] == "ok"
        assert body["defaults"]["epsilon"] == 30.0
        assert body["defaults"]["smooth_kernel"] == 3
        assert body["defaults"]["connectivity"] == 8

    def test_concurrent_requests(self, client):
        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            codes = list(pool.map(lambda _: client.get("/v1/health").status_code, range(16)))
        assert codes == [200] * 16


class TestPreview:
    def test_returns_nonempty_mask(self, client, phantom_payload):
        resp = client.post("/v1/preview", json={
            "image": phantom_payload["image"],
            "labels": phantom_payload["labels"],
        })
        assert resp.status_code == 200, resp.text
        body = resp.json()
        assert body["empty"] is False
        mask = decode_mask(body["mask"])
        assert mask.shape == (96, 96)
        assert mask.any()
        assert set(body["timings_ms"]) >= {"smooth", "grow", "close", "total"}

    def test_deterministic(self, client, phantom_payload):
        payload = {"image": phantom_payload["image"], "labels": phantom_payload["labels"]}
        a = client.post("/v1/preview", json=payload).json()
        b = client.post("/v1/preview", json=payload).json()
        assert a["mask"] == b["mask"]

    def test_reference_gives_per_region_dice(self, client, phantom_payload):
        resp = client.post("/v1/preview", json=phantom_payload)
        assert resp.status_code == 200
        per_region = resp.json()["dice_per_region"]
        assert set(per_region) == {"anterior_horn"}
        assert per_region["anterior_horn"] > 0.8

    def test_zero_regions_empty_mask(self, client):
        img = np.full((32, 32), 50, dtype=np.uint8)
        resp = client.post("/v1/preview", json={
            "image": base64.b64encode(imageio.encode_gray_png(img)).decode(),
            "labels": {"image": "s.png", "height": 32, "width": 32, "regions": []},
        })
        assert resp.status_code == 200
        body = resp.json()
        assert body["empty"] is True
        assert not decode_mask(body["mask"]).any()

    def test_incomplete_body_region_is_400(self, client, phantom_payload):
        labels = {
            "image": "s.png", "height": 96, "width": 96,
            "regions": [{
                "kind": "body",
                "points": [[10, 10]],
                "lines": [[[5, 5], [20, 5]], [[5, 30], [20, 30]]],
            }],
        }
        resp = client.post("/v1/preview", json={
            "image": phantom_payload["image"], "labels": labels,
        })
        assert resp.status_code == 400
        assert "body requires 2 points, got 1" in resp.json()["detail"]

    def test_bad_base64_is_400(self, client, phantom_payload):
        resp = client.post("/v1/preview", json={
            "image": "not base64!", "labels": phantom_payload["labels"],
        })
        assert resp.status_code == 400

    def test_dims_mismatch_is_400(self, client, phantom_payload):
        labels = dict(phantom_payload["labels"], height=50)
        resp = client.post("/v1/preview", json={
            "image": phantom_payload["image"], "labels": labels,
        })
        assert resp.status_code == 400

    def test_unknown_config_key_is_400(self, client, phantom_payload):
        resp = client.post("/v1/preview", json={
            "image": phantom_payload["image"],
            "labels": phantom_payload["labels"],
            "config": {"epsilonn": 5},
        })
        assert resp.status_code == 400
        assert "epsilonn" in resp.json()["detail"]

    def test_config_override_changes_result(self, client, phantom_payload):
        base = {"image": phantom_payload["image"], "labels": phantom_payload["labels"]}
        default = client.post("/v1/preview", json=base).json()
        tight = client.post("/v1/preview", json=dict(base, config={"epsilon": 0})).json()
        a = decode_mask(default["mask"]).sum()
        b = decode_mask(tight["mask"]).sum()
        assert b < a

    def test_self_intersecting_geometry_is_422(self, client):
        img = np.full((64, 64), 50, dtype=np.uint8)
        labels = {
            "image": "s.png", "height": 64, "width": 64,
            "regions": [{
                "kind": "anterior_horn",
                "points": [[40, 60]],
                "lines": [[[0, 0], [20, 60], [40, 0]]],
            }],
        }
        resp = client.post("/v1/preview", json={
            "image": base64.b64encode(imageio.encode_gray_png(img)).decode(),
            "labels": labels,
        })
        assert resp.status_code == 422

    def test_oversized_payload_is_413(self, client, phantom_payload):
        resp = client.post(
            "/v1/preview",
            content=b"x",
            headers={
                "content-type": "application/json",
                "content-length": str(MAX_BODY_BYTES + 1),
            },
        )
        assert resp.status_code == 413
