# ABOUTME: Tests for the binary checkpoint format and its field-specific read errors

import numpy as np
import pytest

from rendnet.exceptions import (
    CheckpointDigestError,
    CheckpointError,
    CheckpointMagicError,
    CheckpointShapeError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from rendnet.models.batch import prepare_document
from rendnet.models.net import predict_batch
from rendnet.models.params import init_params
from rendnet.services.checkpoint_store import (
    MAGIC,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from rendnet.tests.factories import small_pipeline, square_doc, toy_doc


@pytest.fixture
def pipeline():
    return small_pipeline(num_classes=3)


@pytest.fixture
def encoded(pipeline):
    params = init_params(pipeline.model)
    params.bn_state(0).running_var = np.array([2.0, 3.0, 4.0, 5.0])
    return params, encode_checkpoint(params, pipeline, {"epoch": 3})


@pytest.mark.unit
class TestCheckpointFormat:
    def test_decode_restores_everything(self, encoded, pipeline):
        params, data = encoded
        checkpoint = decode_checkpoint(data)
        assert data.startswith(MAGIC)
        assert checkpoint.pipeline == pipeline
        assert checkpoint.metadata == {"epoch": 3}
        restored = checkpoint.params.tensors()
        original = params.tensors()
        assert list(restored) == list(original)
        assert all(np.array_equal(restored[k], original[k]) for k in original)
        assert checkpoint.params.bn_state(0).running_var.tolist() == [2.0, 3.0, 4.0, 5.0]

    def test_encoding_is_stable(self, encoded, pipeline):
        params, data = encoded
        assert encode_checkpoint(params, pipeline, {"epoch": 3}) == data

    def test_save_and_load(self, tmp_path, encoded, pipeline):
        params, _ = encoded
        path = tmp_path / "nested" / "model.rnd"
        save_checkpoint(params, pipeline, path)
        assert load_checkpoint(path).pipeline.model.mode == "full"

    def test_reloaded_model_gives_identical_logits(self, encoded, pipeline):
        params, data = encoded
        samples = [prepare_document(doc, pipeline) for doc in (toy_doc(), square_doc(), toy_doc(1))]
        reloaded = decode_checkpoint(data).params
        assert np.array_equal(predict_batch(params, samples), predict_batch(reloaded, samples))

    def test_config_must_match_params(self, pipeline):
        params = init_params(pipeline.model)
        with pytest.raises(CheckpointError, match="does not match"):
            encode_checkpoint(params, small_pipeline(num_classes=4))


@pytest.mark.unit
class TestCheckpointErrors:
    def test_bad_magic(self, encoded):
        _, data = encoded
        with pytest.raises(CheckpointMagicError) as info:
            decode_checkpoint(b"XXXXX" + data[5:])
        assert info.value.field == "magic"

    def test_bad_version(self, encoded):
        _, data = encoded
        with pytest.raises(CheckpointVersionError):
            decode_checkpoint(data[:5] + (2).to_bytes(4, "little") + data[9:])

    def test_truncated(self, encoded):
        _, data = encoded
        with pytest.raises(CheckpointTruncatedError):
            decode_checkpoint(data[:-4])
        with pytest.raises(CheckpointTruncatedError) as info:
            decode_checkpoint(data[:7])
        assert info.value.field == "version"

    def test_trailing_bytes(self, encoded):
        _, data = encoded
        with pytest.raises(CheckpointShapeError):
            decode_checkpoint(data + b"\x00")

    def test_digest_mismatch(self, encoded):
        _, data = encoded
        marker = b'"config_digest":"'
        at = data.index(marker) + len(marker)
        flipped = b"0" if data[at:at + 1] != b"0" else b"1"
        with pytest.raises(CheckpointDigestError):
            decode_checkpoint(data[:at] + flipped + data[at + 1:])

    def test_unreadable_header(self, encoded):
        _, data = encoded
        at = data.index(b'"config"')
        with pytest.raises(CheckpointError) as info:
            decode_checkpoint(data[:at] + b"#" + data[at + 1:])
        assert info.value.field == "header"

    def test_shape_mismatch(self, encoded):
        _, data = encoded
        name = b"embed.W"
        at = data.index(name) + len(name) + 4
        bad_dim = (5).to_bytes(4, "little")
        with pytest.raises(CheckpointShapeError) as info:
            decode_checkpoint(data[:at] + bad_dim + data[at + 4:])
        assert info.value.field == "embed.W"
