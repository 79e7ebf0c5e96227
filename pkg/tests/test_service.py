import base64
import io

import numpy as np
import pytest
from fastapi.testclient import TestClient

from islnet.model import Model, build_desk
from islnet.preproc import PipelineConfig
from islnet.service import create_app


@pytest.fixture(scope="module")
def client():
    model = Model.build(build_desk(class_count=10), seed=1)
    app = create_app(model, PipelineConfig(target_size=(64, 64)),
                     max_body_bytes=1024 * 1024)
    return TestClient(app)


def _png_bytes(seed=None, size=64):
    from PIL import Image
    if seed is None:
        img = Image.new("RGB", (size, size), (0, 0, 0))
    else:
        arr = np.random.default_rng(seed).integers(0, 256, (size, size, 3)).astype(np.uint8)
        img = Image.fromarray(arr)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def test_health_reports_model_id(client):
    doc = client.get("/health").json()
    assert doc["status"] == "ok"
    assert len(doc["model"]) == 12


def test_labels_ordered(client):
    labels = client.get("/labels").json()
    assert len(labels) == 10
    assert labels == sorted(labels)


def test_labels_full_gesture_set_digits_then_letters():
    model = Model.build(build_desk(), seed=0)          # default 35 classes
    app = create_app(model, PipelineConfig(target_size=(64, 64)))
    labels = TestClient(app).get("/labels").json()
    assert len(labels) == 35
    assert labels == [str(d) for d in range(1, 10)] + [chr(c) for c in range(65, 91)]


def test_predict_black_png_valid_distribution(client):
    r = client.post("/predict?k=10", content=_png_bytes(),
                    headers={"content-type": "image/png"})
    assert r.status_code == 200
    doc = r.json()
    probs = [p["probability"] for p in doc["predictions"]]
    assert sum(probs) == pytest.approx(1.0, abs=1e-9)
    assert probs == sorted(probs, reverse=True)
    assert "timings_ms" not in doc


def test_predict_default_top3(client):
    r = client.post("/predict", content=_png_bytes(3),
                    headers={"content-type": "image/png"})
    assert len(r.json()["predictions"]) == 3


def test_predict_base64_json_matches_raw(client):
    png = _png_bytes(5)
    raw = client.post("/predict", content=png, headers={"content-type": "image/png"})
    b64 = client.post("/predict", json={"image_b64": base64.b64encode(png).decode()})
    assert raw.json() == b64.json()


def test_predict_text_body_is_400_with_error_field(client):
    r = client.post("/predict", content=b"definitely not an image",
                    headers={"content-type": "text/plain"})
    assert r.status_code == 400
    assert r.json()["error"] == "bad_image"


def test_predict_bad_base64_is_400(client):
    r = client.post("/predict", json={"image_b64": "!!!not-base64!!!"})
    assert r.status_code == 400


def test_predict_empty_body_is_400(client):
    r = client.post("/predict", content=b"", headers={"content-type": "image/png"})
    assert r.status_code == 400


def test_predict_undersized_image_is_400(client):
    # decodes fine but the pipeline cannot run canny on 1x1
    r = client.post("/predict", content=_png_bytes(size=1),
                    headers={"content-type": "image/png"})
    assert r.status_code == 400
    assert r.json()["error"] == "unprocessable_image"


def test_predict_oversized_body_is_413(client):
    r = client.post("/predict", content=b"x" * (2 * 1024 * 1024),
                    headers={"content-type": "image/png"})
    assert r.status_code == 413
    assert r.json()["error"] == "body_too_large"


def test_identical_bodies_identical_responses(client):
    png = _png_bytes(9)
    a = client.post("/predict", content=png, headers={"content-type": "image/png"})
    b = client.post("/predict", content=png, headers={"content-type": "image/png"})
    assert a.content == b.content


def test_timings_opt_in(client):
    r = client.post("/predict?timings=1", content=_png_bytes(2),
                    headers={"content-type": "image/png"})
    t = r.json()["timings_ms"]
    assert set(t) == {"grayscale", "threshold", "canny", "resize"}
    assert all(v >= 0.0 for v in t.values())


def test_jpeg_accepted(client):
    from PIL import Image
    arr = np.random.default_rng(11).integers(0, 256, (64, 64, 3)).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="JPEG")
    r = client.post("/predict", content=buf.getvalue(),
                    headers={"content-type": "image/jpeg"})
    assert r.status_code == 200
