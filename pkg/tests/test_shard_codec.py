from app.repository.system_registry import SystemRegistry
from app.services.dynamics_service import DynamicsService
from app.tasks.orbit_task import compute_orbit_shard, decode_shard_result, encode_shard_request
from app.tasks.shard_codec import dumps, loads


class TestCodec:
    def test_wide_integers_survive(self):
        ideal = (1 << 90) | 5
        assert loads(dumps([ideal, 3])) == [ideal, 3]

    def test_tuples_survive(self):
        assert loads(dumps({"key": (0, 1, 1)})) == {"key": (0, 1, 1)}


class TestOrbitTask:
    def test_worker_matches_in_process_trace(self):
        spec = SystemRegistry.parse({"kind": "box", "dims": [2, 2, 2]})
        action = SystemRegistry.build_action(spec)
        expected = DynamicsService.trace_shard(action, 0, 20, 20)
        assert decode_shard_result(compute_orbit_shard(encode_shard_request(spec, 0, 20, 20))) == expected

    def test_tableau_keys(self):
        spec = SystemRegistry.parse({"kind": "inc", "shape": [2, 2], "q": 4})
        action = SystemRegistry.build_action(spec)
        expected = DynamicsService.trace_shard(action, 0, 10, 50)
        assert decode_shard_result(compute_orbit_shard(encode_shard_request(spec, 0, 10, 50))) == expected
