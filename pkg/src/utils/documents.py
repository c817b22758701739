"""
BDS and Graph JSON documents.

BDS:    {"format_version": 1, "atoms": ["x", "y"], "labels": ["a"],
         "dual_maps": {"a": {"x": "y", "y": "x"}}}
Graph:  {"vertices": ["u", "v"], "edges": [{"name": "e", "source": "u", "range": "v"}]}

dual_maps lists, per label, the atoms its dual map is defined on. A label
missing from dual_maps has the empty map.
"""
import hashlib
import json

from src.algebra.dynamics import BdsSpec
from src.graphs.adapter import Edge, GraphSpec
from src.utils.errors import NonFunctionalMapError, SchemaError, UndeclaredIdError

FORMAT_VERSION = 1


class _Pairs(dict):
    """ keeps track of keys that appeared more than once in a JSON object """
    duplicates = ()


def _pairs_hook(pairs):
    obj = _Pairs(pairs)
    seen, duplicates = set(), []
    for key, _ in pairs:
        if key in seen:
            duplicates.append(key)
        seen.add(key)
    obj.duplicates = tuple(duplicates)
    return obj


def _load(text: str) -> dict:
    try:
        doc = json.loads(text, object_pairs_hook=_pairs_hook)
    except json.JSONDecodeError as e:
        raise SchemaError(f'Invalid JSON: {e.msg}', line=e.lineno) from e
    if not isinstance(doc, dict):
        raise SchemaError('Document must be a JSON object')
    return doc


def _check_id(value, field: str):
    if not isinstance(value, str) or not value:
        raise SchemaError('ids must be nonempty strings', field=field)


def _id_list(doc: dict, key: str) -> list:
    ids = doc.get(key)
    if not isinstance(ids, list) or not ids:
        raise SchemaError(f'"{key}" must be a nonempty list', field=key)
    for i, value in enumerate(ids):
        _check_id(value, f'{key}.{i}')
    duplicates = sorted({value for value in ids if ids.count(value) > 1})
    if duplicates:
        raise SchemaError(f'Duplicate ids {duplicates}', field=key)
    return ids


def _check_version(doc: dict, required: bool):
    if 'format_version' not in doc and not required:
        return
    version = doc.get('format_version')
    if version != FORMAT_VERSION or isinstance(version, bool):
        raise SchemaError(f'format_version "{version}" UNKNOWN, expected {FORMAT_VERSION}', field='format_version')


def parse_bds(text: str) -> BdsSpec:
    doc = _load(text)
    _check_version(doc, required=True)
    atoms = _id_list(doc, 'atoms')
    labels = _id_list(doc, 'labels')
    dual_maps = doc.get('dual_maps', _Pairs())
    if not isinstance(dual_maps, dict):
        raise SchemaError('"dual_maps" must be an object', field='dual_maps')
    if dual_maps.duplicates:
        raise NonFunctionalMapError(f'Label "{dual_maps.duplicates[0]}" has more than one dual map')

    declared_atoms, declared_labels = set(atoms), set(labels)
    maps = {}
    for label, mapping in dual_maps.items():
        if label not in declared_labels:
            raise UndeclaredIdError(f'Label "{label}" UNKNOWN (field "dual_maps.{label}")')
        if not isinstance(mapping, dict):
            raise SchemaError('a dual map must be an object', field=f'dual_maps.{label}')
        if mapping.duplicates:
            raise NonFunctionalMapError(
                f'Atom "{mapping.duplicates[0]}" has two images under "{label}" (field "dual_maps.{label}")')
        images = {}
        for source, target in mapping.items():
            if isinstance(target, list):
                if len(target) != 1:
                    raise NonFunctionalMapError(
                        f'Atom "{source}" has {len(target)} images under "{label}" (field "dual_maps.{label}.{source}")')
                target = target[0]
            _check_id(target, f'dual_maps.{label}.{source}')
            for atom in (source, target):
                if atom not in declared_atoms:
                    raise UndeclaredIdError(f'Atom "{atom}" UNKNOWN (field "dual_maps.{label}.{source}")')
            images[source] = target
        maps[label] = images
    return BdsSpec.from_maps(atoms, labels, maps)


def serialize_bds(spec: BdsSpec) -> str:
    doc = {
        'format_version': FORMAT_VERSION,
        'atoms': list(spec.atoms),
        'labels': list(spec.labels),
        'dual_maps': {label: spec.dual_map(label) for label in spec.labels},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + '\n'


def parse_graph(text: str) -> GraphSpec:
    doc = _load(text)
    _check_version(doc, required=False)
    vertices = _id_list(doc, 'vertices')
    edges = doc.get('edges', [])
    if not isinstance(edges, list):
        raise SchemaError('"edges" must be a list', field='edges')
    declared = set(vertices)
    parsed = []
    for i, edge in enumerate(edges):
        if not isinstance(edge, dict) or set(edge) != {'name', 'source', 'range'}:
            raise SchemaError('an edge needs exactly "name", "source" and "range"', field=f'edges.{i}')
        for key in ('name', 'source', 'range'):
            _check_id(edge[key], f'edges.{i}.{key}')
        for end in ('source', 'range'):
            if edge[end] not in declared:
                raise UndeclaredIdError(f'Vertex "{edge[end]}" UNKNOWN (field "edges.{i}.{end}")')
        parsed.append(Edge(edge['name'], edge['source'], edge['range']))
    names = [e.name for e in parsed]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise SchemaError(f'Duplicate edge names {duplicates}', field='edges')
    return GraphSpec(tuple(vertices), tuple(parsed))


def serialize_graph(e_graph: GraphSpec) -> str:
    doc = {
        'format_version': FORMAT_VERSION,
        'vertices': list(e_graph.vertices),
        'edges': [e._asdict() for e in e_graph.edges],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + '\n'


def is_graph_document(text: str) -> bool:
    doc = _load(text)
    return 'vertices' in doc


def digest(canonical_text: str) -> str:
    return hashlib.sha256(canonical_text.encode('utf-8')).hexdigest()
