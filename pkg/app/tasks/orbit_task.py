from typing import List

from app.schemas.run_schema import SystemSpec
from app.services.dynamics_service import DynamicsService, ShardOrbit
from app.tasks.shard_codec import dumps, loads
from app.utils.logger import log


def encode_shard_request(spec: SystemSpec, start: int, stop: int, limit: int) -> bytes:
    return dumps({"spec": spec.model_dump_json(), "start": start, "stop": stop, "limit": limit})


def decode_shard_result(data: bytes) -> List[ShardOrbit]:
    return [tuple(orbit) for orbit in loads(data)]


def compute_orbit_shard(payload: bytes) -> bytes:
    """
    Worker-process entry point: rebuild the action from its spec, trace the
    orbits whose least state falls in [start, stop), return them packed.
    """
    # the registry imports the dynamics service, which reaches this module lazily
    from app.repository.system_registry import cached_action

    request = loads(payload)
    try:
        action = cached_action(request["spec"])
        found = DynamicsService.trace_shard(action, request["start"], request["stop"], request["limit"])
        return dumps([list(orbit) for orbit in found])
    except Exception as exc:
        log.error(f"Failed to compute orbit shard [{request['start']}, {request['stop']}): {exc}")
        raise
