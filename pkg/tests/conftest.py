import threading
from pathlib import Path

import pytest

from sharedcanvas.graph import Graph, parse_manifest
from sharedcanvas.service import make_server

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_fixture(name: str) -> Graph:
    return parse_manifest(fixture_path(name).read_bytes(), source=name)


@pytest.fixture
def serve():
    """Start a service over a graph on an ephemeral port; yields base URLs."""
    servers = []

    def start(graph: Graph) -> str:
        server = make_server(graph, port=0)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append((server, thread))
        host, port = server.server_address[:2]
        return f"http://{host}:{port}"

    yield start
    for server, thread in servers:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)
