"""Scene document model: loading, validation, canonical serialization."""

import json

import pytest

from scenematch.scene import (
    BoundingBox,
    PerceivedObject,
    Scene,
    SceneFormatError,
    load_scene,
    save_scene,
    scene_to_doc,
    unit_interval,
)


def make_object(**overrides) -> PerceivedObject:
    fields = dict(
        id="w1",
        detected_type="pipe",
        detection_confidence=0.8,
        bbox=BoundingBox(0, 10, 0, 5),
    )
    fields.update(overrides)
    return PerceivedObject(**fields)


class TestUnitInterval:
    def test_accepts_bounds(self):
        assert unit_interval(0, "x") == 0.0
        assert unit_interval(1, "x") == 1.0

    @pytest.mark.parametrize("value", [-0.1, 1.1, "0.5", None, True])
    def test_rejects_out_of_range_and_non_numbers(self, value):
        with pytest.raises((SceneFormatError, ValueError)):
            unit_interval(value, "x")


class TestBoundingBox:
    def test_dimensions_and_center(self):
        box = BoundingBox(2, 10, 4, 8)
        assert box.width == 8
        assert box.height == 4
        assert box.center == (6.0, 6.0)
        assert box.as_list() == [2, 10, 4, 8]

    def test_inverted_extent_rejected(self):
        with pytest.raises(ValueError):
            BoundingBox(10, 2, 0, 5)
        with pytest.raises(ValueError):
            BoundingBox(0, 5, 8, 4)

    def test_degenerate_extent_allowed(self):
        box = BoundingBox(5, 5, 0, 9)
        assert box.width == 0


class TestPerceivedObject:
    def test_unknown_type_rejected(self):
        with pytest.raises(SceneFormatError):
            make_object(detected_type="widget")

    def test_unknown_color_rejected(self):
        with pytest.raises(SceneFormatError):
            make_object(color_degrees={"purple": 0.5})

    def test_unknown_override_attribute_rejected(self):
        with pytest.raises(SceneFormatError):
            make_object(attribute_overrides={"slanted": 0.5})

    def test_out_of_range_confidence_rejected(self):
        with pytest.raises(SceneFormatError):
            make_object(detection_confidence=1.5)

    def test_overrides_may_name_any_vocabulary_attribute(self):
        obj = make_object(attribute_overrides={"horizontal": 0.8, "blue": 0.1})
        assert obj.attribute_overrides["horizontal"] == 0.8


class TestScene:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(SceneFormatError):
            Scene((make_object(), make_object()))

    def test_by_id_lookup(self):
        scene = Scene((make_object(),))
        assert scene.by_id("w1").detected_type == "pipe"
        with pytest.raises(KeyError):
            scene.by_id("nope")

    def test_relation_override_validates_predicate_args_and_range(self):
        a, b = make_object(), make_object(id="w2")
        Scene((a, b), {("on", ("w1", "w2")): 0.7})
        with pytest.raises(SceneFormatError):
            Scene((a, b), {("sideways", ("w1", "w2")): 0.7})
        with pytest.raises(SceneFormatError):
            Scene((a, b), {("on", ("w1", "zz")): 0.7})
        with pytest.raises(SceneFormatError):
            Scene((a, b), {("on", ("w1",)): 0.7})
        with pytest.raises(SceneFormatError):
            Scene((a, b), {("on", ("w1", "w2")): 1.7})


class TestDocumentFormat:
    def test_load_fixture(self, installation):
        assert len(installation.objects) == 14
        om13 = installation.by_id("omega13")
        assert om13.detection_confidence == 1.0
        assert om13.color_degrees == {"red": 1.0}
        assert om13.bbox.as_list() == [363, 369, 182, 224]

    def test_save_load_roundtrip(self, installation):
        restored = load_scene(save_scene(installation))
        key = lambda o: o.id
        assert sorted(restored.objects, key=key) == sorted(installation.objects, key=key)
        assert restored.relation_overrides == installation.relation_overrides
        # Canonical form is a fixpoint: a second round trip is byte-identical.
        assert save_scene(restored) == save_scene(installation)

    def test_save_orders_objects_and_keys(self):
        scene = Scene((make_object(id="zz"), make_object(id="aa")))
        doc = scene_to_doc(scene)
        assert [o["id"] for o in doc["objects"]] == ["aa", "zz"]

    def test_relation_overrides_roundtrip(self):
        scene = Scene(
            (make_object(), make_object(id="w2")),
            {("near_from", ("w1", "w2")): 0.4},
        )
        restored = load_scene(save_scene(scene))
        assert restored.relation_overrides == {("near_from", ("w1", "w2")): 0.4}

    def test_missing_required_key_rejected(self):
        with pytest.raises(SceneFormatError):
            load_scene(json.dumps({"objects": [{"id": "a", "type": "pipe"}]}))

    def test_bad_bbox_shape_rejected(self):
        with pytest.raises(SceneFormatError):
            load_scene(
                json.dumps(
                    {
                        "objects": [
                            {
                                "id": "a",
                                "type": "pipe",
                                "confidence": 0.5,
                                "bbox": [0, 1, 2],
                            }
                        ]
                    }
                )
            )

    def test_non_document_input_rejected(self):
        with pytest.raises(SceneFormatError):
            load_scene("[1, 2, 3]")
        with pytest.raises(SceneFormatError):
            load_scene("not json at all {")
