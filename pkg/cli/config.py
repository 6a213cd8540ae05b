import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Optional

TOOL_VERSION = '0.3.0'

DEFAULT_CACHE_DIR = 'data/cache'
DEFAULT_SEED = 20240
DEFAULT_JOBS = 1


def env_cache_dir() -> str:
    return os.getenv('STEINBERG_CACHE_DIR', DEFAULT_CACHE_DIR)


def env_seed() -> int:
    return int(os.getenv('STEINBERG_SEED', DEFAULT_SEED))


def env_jobs() -> int:
    return int(os.getenv('STEINBERG_JOBS', DEFAULT_JOBS))


def content_hash(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


@dataclass
class RunConfig:
    """Flags of one command plus the environment defaults it ran with"""
    command: str
    params: dict = field(default_factory=dict)
    output: Optional[str] = None
    format: str = 'json'
    seed: int = field(default_factory=env_seed)
    jobs: int = field(default_factory=env_jobs)
    cache_dir: str = field(default_factory=env_cache_dir)

    def to_json(self) -> dict:
        payload = asdict(self)
        # the cache location does not change results
        payload.pop('cache_dir')
        return payload

    def report(self, result: dict, inputs: Optional[dict] = None) -> dict:
        """Report envelope: config, seed, version and input hashes around a result"""
        inputs = inputs or {}
        return {
            'config': self.to_json(),
            'seed': self.seed,
            'tool_version': TOOL_VERSION,
            'input_hashes': {name: content_hash(value) for name, value in sorted(inputs.items())},
            'result': result,
        }
