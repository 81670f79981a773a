import json

import pytest

from weakgrow.errors import (
    DuplicateKindError,
    LabelBoundsError,
    LabelSchemaError,
    LabelSyntaxError,
)
from weakgrow.imaging import rasterize_segment
from weakgrow.weaklabel import (
    Polyline,
    RegionAnnotation,
    WeakLabelSet,
    bounding_box,
    parse_weak_labels,
    serialize_weak_labels,
)


def horn_doc():
    return {
        "image": "slice_01.png",
        "height": 64,
        "width": 64,
        "regions": [
            {
                "kind": "anterior_horn",
                "points": [[40, 50]],
                "lines": [[[10, 10], [20, 12], [30, 10], [40, 12], [50, 10]]],
            }
        ],
    }


def body_doc():
    return {
        "image": "slice_02.png",
        "height": 64,
        "width": 64,
        "regions": [
            {
                "kind": "body",
                "points": [[20, 30], [44, 30]],
                "lines": [
                    [[10, 10], [50, 10]],
                    [[10, 52], [50, 52]],
                ],
            }
        ],
    }


class TestParse:
    def test_single_horn_roundtrip(self):
        labels = parse_weak_labels(json.dumps(horn_doc()))
        assert len(labels.regions) == 1
        region = labels.regions[0]
        assert region.kind == "anterior_horn"
        assert region.points == ((40, 50),)
        assert len(region.lines[0].points) == 5

    def test_body_with_one_point_rejected(self):
        doc = body_doc()
        doc["regions"][0]["points"] = [[20, 30]]
        with pytest.raises(LabelSchemaError, match="body requires 2 points"):
            parse_weak_labels(json.dumps(doc))

    def test_horn_with_two_points_rejected(self):
        doc = horn_doc()
        doc["regions"][0]["points"] = [[40, 50], [41, 50]]
        with pytest.raises(LabelSchemaError, match="anterior_horn requires 1 point"):
            parse_weak_labels(json.dumps(doc))

    def test_out_of_bounds_coordinate_rejected(self):
        doc = horn_doc()
        doc["regions"][0]["points"] = [[-1, 5]]
        with pytest.raises(LabelBoundsError, match=r"\(-1, 5\)"):
            parse_weak_labels(json.dumps(doc))

    def test_duplicate_kind_rejected(self):
        doc = horn_doc()
        doc["regions"].append(doc["regions"][0])
        with pytest.raises(DuplicateKindError, match="region 1"):
            parse_weak_labels(json.dumps(doc))

    def test_syntax_error(self):
        with pytest.raises(LabelSyntaxError):
            parse_weak_labels("{not json")

    def test_non_integer_coordinates_rejected(self):
        doc = horn_doc()
        doc["regions"][0]["points"] = [[40.5, 50]]
        with pytest.raises(LabelSchemaError, match="integer"):
            parse_weak_labels(json.dumps(doc))

    def test_body_points_must_be_upper_then_lower(self):
        doc = body_doc()
        doc["regions"][0]["points"] = [[44, 30], [20, 30]]
        with pytest.raises(LabelSchemaError, match="upper then lower"):
            parse_weak_labels(json.dumps(doc))

    def test_body_line_must_start_upper(self):
        doc = body_doc()
        doc["regions"][0]["lines"][0] = [[50, 10], [10, 10]]
        with pytest.raises(LabelSchemaError, match="upper endpoint"):
            parse_weak_labels(json.dumps(doc))

    def test_missing_key_rejected(self):
        with pytest.raises(LabelSchemaError, match="regions"):
            parse_weak_labels('{"image": "a", "height": 4, "width": 4}')

    def test_validation_total_on_garbage(self):
        # any malformed payload yields a typed error, never a partial value
        payloads = ["[]", "3", '{"image": 1}', '{"image":"a","height":0,"width":4,"regions":[]}']
        for payload in payloads:
            with pytest.raises((LabelSchemaError, LabelSyntaxError)):
                parse_weak_labels(payload)


class TestSerialize:
    def test_empty_regions(self):
        labels = WeakLabelSet(image="x.png", height=4, width=4, regions=())
        doc = json.loads(serialize_weak_labels(labels))
        assert doc["regions"] == []

    def test_roundtrip_three_regions(self):
        doc = {
            "image": "s.png",
            "height": 64,
            "width": 64,
            "regions": horn_doc()["regions"]
            + [
                {
                    "kind": "posterior_horn",
                    "points": [[30, 20]],
                    "lines": [[[5, 5], [8, 8]]],
                }
            ]
            + body_doc()["regions"],
        }
        labels = parse_weak_labels(json.dumps(doc))
        assert parse_weak_labels(serialize_weak_labels(labels)) == labels

    def test_canonical_form_is_stable(self):
        labels = parse_weak_labels(json.dumps(horn_doc()))
        text = serialize_weak_labels(labels)
        assert serialize_weak_labels(parse_weak_labels(text)) == text


class TestMidpoint:
    def test_index_midpoint(self):
        line = Polyline(((0, 0), (0, 4), (0, 20), (0, 21)))
        assert line.midpoint("index") == (0, 4)  # index (4-1)//2 = 1

    def test_arclength_midpoint(self):
        line = Polyline(((0, 0), (0, 4), (0, 20), (0, 21)))
        assert line.midpoint("arclength") == (0, 11)  # half of 21 = 10.5, rounded half-up


class TestBoundingBox:
    def _region(self):
        return RegionAnnotation(
            kind="anterior_horn",
            points=((10, 10),),
            lines=(Polyline(((5, 5), (5, 15))),),
        )

    def test_tight_box(self):
        assert bounding_box(self._region()) == (5, 10, 5, 15)

    def test_margin_and_clamp(self):
        assert bounding_box(self._region(), margin=2, dims=(20, 18)) == (3, 12, 3, 17)

    def test_exhaustive_minmax_oracle_on_body(self):
        region = RegionAnnotation(
            kind="body",
            points=((20, 55), (40, 55)),
            lines=(
                Polyline(((20, 30), (40, 30))),
                Polyline(((20, 80), (40, 80))),
            ),
        )
        pts = list(region.points) + [p for ln in region.lines for p in ln.points]
        oracle = (
            min(p[0] for p in pts),
            max(p[0] for p in pts),
            min(p[1] for p in pts),
            max(p[1] for p in pts),
        )
        assert bounding_box(region) == oracle == (20, 40, 30, 80)

    def test_contains_all_rasterized_line_pixels(self):
        region = RegionAnnotation(
            kind="posterior_horn",
            points=((12, 40),),
            lines=(Polyline(((3, 7), (19, 31), (4, 33))),),
        )
        rmin, rmax, cmin, cmax = bounding_box(region)
        for line in region.lines:
            for a, b in zip(line.points, line.points[1:]):
                for r, c in rasterize_segment(a, b):
                    assert rmin <= r <= rmax and cmin <= c <= cmax
