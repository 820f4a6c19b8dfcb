"""
The serialization API supports the following datatypes: dict, list, tuple, str, int, float, bool,
None, complex, numpy arrays and SuperOperator. Complex matrices are written row-major with their
dims, each entry a two-element [re, im] array.

>>> import numpy as np
>>> s = serializeObject(np.array([[1+2j, 0], [0, 1]]))
>>> s['dims'], s['data'][0]
([2, 2], [1.0, 2.0])
>>> bool(np.array_equal(deserializeObject(s), np.array([[1+2j, 0], [0, 1]])))
True
"""
import csv
import json

import numpy as np

from adelim.toolbox.errors import ConfigError
from adelim.toolbox.superop import SuperOperator

def serializeArray(A):
    A = np.asarray(A)
    flat = A.astype(complex).reshape(-1)
    return {'__class__': 'ndarray', 'dims': list(A.shape),
            'data': [[float(z.real), float(z.imag)] for z in flat]}

def serializeObject(Objects):
    if isinstance(Objects, dict):
        return {str(k): serializeObject(v) for k, v in Objects.items()}
    elif isinstance(Objects, (list, tuple)):
        return [serializeObject(i) for i in Objects]
    elif isinstance(Objects, SuperOperator):
        return {'__class__': 'SuperOperator', 'd_in': Objects.d_in, 'd_out': Objects.d_out,
                'matrix': serializeArray(Objects.matrix)}
    elif isinstance(Objects, np.ndarray):
        return serializeArray(Objects)
    elif isinstance(Objects, (bool, np.bool_)):
        return bool(Objects)
    elif isinstance(Objects, (int, np.integer)):
        return int(Objects)
    elif isinstance(Objects, (float, np.floating)):
        return float(Objects)
    elif isinstance(Objects, (complex, np.complexfloating)):
        return {'__class__': 'complex', '__value__': [float(Objects.real), float(Objects.imag)]}
    elif Objects is None or isinstance(Objects, str):
        return Objects
    elif hasattr(Objects, 'to_dict'):
        return serializeObject(Objects.to_dict())
    raise TypeError(repr(Objects) + " is not serializable")

def deserializeArray(Object):
    data = np.asarray(Object['data'], dtype=float).reshape(-1, 2)
    return (data[:, 0] + 1j * data[:, 1]).reshape(Object['dims'])

def deserializeObject(Objects):
    if isinstance(Objects, dict):
        cls = Objects.get('__class__')
        if cls == 'ndarray':
            return deserializeArray(Objects)
        elif cls == 'SuperOperator':
            return SuperOperator(deserializeArray(Objects['matrix']), Objects['d_in'], Objects['d_out'])
        elif cls == 'complex':
            re, im = Objects['__value__']
            return complex(re, im)
        return {k: deserializeObject(v) for k, v in Objects.items()}
    elif isinstance(Objects, list):
        return [deserializeObject(i) for i in Objects]
    return Objects

def dumps(Object):
    '''Deterministic JSON text (sorted keys, LF line endings)'''
    return json.dumps(serializeObject(Object), sort_keys=True, indent=1) + "\n"

def loads(text):
    try:
        return deserializeObject(json.loads(text))
    except json.JSONDecodeError as e:
        raise ConfigError("invalid JSON: %s" % e)

def write_csv(path, rows, fieldnames=None):
    '''Rows of scalars as CSV with a header row, UTF-8, LF line endings'''
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n', extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_value(row.get(k)) for k in fieldnames})
    return path

def _csv_value(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return int(v)
    return '' if v is None else v
