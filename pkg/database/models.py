import hashlib
import json
import logging
import os
import sqlite3
from typing import Optional

from complexes import BoundedComplex, BoundedComplexSpec, enumerate_complex

logger = logging.getLogger(__name__)


def payload_hash(payload: dict) -> str:
    """SHA-256 of a complex payload without its own content_hash field."""
    body = {k: v for k, v in payload.items() if k != "content_hash"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


class CacheManager:
    """Enumerated complexes keyed by the hash of their spec, stored in sqlite beside the outputs"""

    def __init__(self, cache_dir='data/cache', tool_version=''):
        self.cache_dir = cache_dir
        self.tool_version = tool_version
        os.makedirs(cache_dir, exist_ok=True)
        self.db_path = os.path.join(cache_dir, 'complexes.db')
        self.init_database()

    def init_database(self):
        """Initialize the cache table"""
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                CREATE TABLE IF NOT EXISTS complexes (
                    spec_hash TEXT PRIMARY KEY,
                    content_hash TEXT NOT NULL,
                    payload TEXT NOT NULL,
                    tool_version TEXT
                )
            ''')
            conn.commit()

    @staticmethod
    def spec_key(spec: BoundedComplexSpec, max_dim: Optional[int] = None) -> str:
        key = {"spec": spec.to_json(), "max_dim": max_dim}
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()

    def store_complex(self, X: BoundedComplex, max_dim: Optional[int] = None):
        payload = X.to_json()
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('''
                INSERT OR REPLACE INTO complexes (spec_hash, content_hash, payload, tool_version)
                VALUES (?, ?, ?, ?)
            ''', (self.spec_key(X.spec, max_dim), payload["content_hash"],
                  json.dumps(payload, sort_keys=True), self.tool_version))
            conn.commit()

    def drop_complex(self, spec_hash: str):
        with sqlite3.connect(self.db_path) as conn:
            conn.execute('DELETE FROM complexes WHERE spec_hash = ?', (spec_hash,))
            conn.commit()

    def load_complex(self, spec: BoundedComplexSpec, max_dim: Optional[int] = None) -> Optional[BoundedComplex]:
        """Cached complex, or None on a miss, a version mismatch, or a payload that no longer matches its hash"""
        spec_hash = self.spec_key(spec, max_dim)
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.cursor()
            cursor.execute('SELECT content_hash, payload, tool_version FROM complexes WHERE spec_hash = ?', (spec_hash,))
            row = cursor.fetchone()
        if row is None:
            return None

        content_hash, text, stored_version = row
        if stored_version != self.tool_version:
            logger.info(f"Cache entry for {spec.label} was written by version {stored_version}; re-enumerating")
            return None
        payload = json.loads(text)
        if payload_hash(payload) != content_hash:
            logger.warning(f"Cache entry for {spec.label} failed re-hashing; dropping it")
            self.drop_complex(spec_hash)
            return None
        logger.info(f"Cache hit for {spec.label}")
        return BoundedComplex.from_json(payload)

    def get_or_enumerate(self, spec: BoundedComplexSpec, max_dim: Optional[int] = None, n_jobs: int = 1) -> BoundedComplex:
        X = self.load_complex(spec, max_dim)
        if X is None:
            X = enumerate_complex(spec, max_dim, n_jobs)
            self.store_complex(X, max_dim)
        return X
