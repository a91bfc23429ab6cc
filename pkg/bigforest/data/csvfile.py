#-------------------------------------------------------------------------------
# bigforest: data/csvfile.py
#
# Reading and writing datasets as CSV files described by a column schema
#
# This code is in the public domain
#-------------------------------------------------------------------------------
from collections import namedtuple, OrderedDict

import numpy as np
import pandas as pd

from ..common.exceptions import DataError
from ..common.utils import data_assert
from .dataset import Dataset


# Roles a column can play. 'tag' holds submodel provenance tags (1 or 2).
COLUMN_ROLES = ('numeric', 'categorical', 'label', 'ignore', 'tag')

# Field values treated as missing; rows holding one are dropped.
MISSING_TOKENS = frozenset(('', 'NA', 'NaN', 'nan', '?'))

# Result of load_csv: the Dataset and the number of dropped rows.
CSVData = namedtuple('CSVData', 'dataset dropped')


def read_schema(path):
    """ Parse a schema file: one "column = role" line per column. Blank lines
        and lines starting with '#' are ignored. Returns an OrderedDict.
    """
    schema = OrderedDict()
    with open(path, 'rt', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            data_assert('=' in line,
                '%s:%d: expected "column = role"' % (path, lineno))
            column, role = (s.strip() for s in line.split('=', 1))
            data_assert(role in COLUMN_ROLES,
                '%s:%d: unknown role %r' % (path, lineno, role))
            schema[column] = role
    return schema


def write_schema(schema, path):
    with open(path, 'wt', encoding='utf-8') as f:
        for column, role in schema.items():
            f.write('%s = %s\n' % (column, role))


def dataset_schema(ds, label_column='Y', tag_column='submodel'):
    """ The schema write_csv uses for ds.
    """
    schema = OrderedDict((c, 'numeric') for c in ds.column_names)
    schema[label_column] = 'label'
    if ds.submodel_tags is not None:
        schema[tag_column] = 'tag'
    return schema


def infer_schema(path, label_column='Y', tag_column='submodel'):
    """ Schema of a CSV file without a schema file: label_column is the
        label, tag_column (when present) the submodel tag and every other
        column numeric.
    """
    try:
        header = list(pd.read_csv(path, nrows=0, skipinitialspace=True,
                                  encoding='utf-8').columns)
    except FileNotFoundError:
        raise DataError('no such file: %s' % path)
    except pd.errors.EmptyDataError:
        raise DataError('%s: missing header line' % path)
    data_assert(label_column in header,
        '%s: no %r column; give a schema file' % (path, label_column))
    schema = OrderedDict()
    for column in header:
        if column == label_column:
            schema[column] = 'label'
        elif column == tag_column:
            schema[column] = 'tag'
        else:
            schema[column] = 'numeric'
    return schema


def load_csv(path, schema):
    """ Load a comma-separated file with one header line into a Dataset.

        schema maps every column of the file to one of COLUMN_ROLES; exactly
        one column must be the label. Categorical features and labels are
        encoded by the lexicographic order of their distinct values. Rows
        holding a missing value in a used column are dropped and counted.

        Returns CSVData(dataset, dropped). Raises DataError naming the data
        row (0-based) and file line for malformed rows and bad values.
    """
    label_columns = [c for c, role in schema.items() if role == 'label']
    data_assert(len(label_columns) == 1,
        'schema must declare exactly one label column, found %d' % (
            len(label_columns)))
    for role in schema.values():
        data_assert(role in COLUMN_ROLES, 'unknown column role %r' % role)

    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False,
                         skipinitialspace=True, encoding='utf-8')
    except FileNotFoundError:
        raise DataError('no such file: %s' % path)
    except pd.errors.EmptyDataError:
        raise DataError('%s: missing header line' % path)
    except pd.errors.ParserError as e:
        raise DataError('%s: malformed row: %s' % (path, e))

    header = list(df.columns)
    unknown = [c for c in header if c not in schema]
    data_assert(not unknown, '%s: unknown columns %s' % (path, unknown))
    absent = [c for c in schema if c not in header]
    data_assert(not absent, '%s: columns %s not found' % (path, absent))

    # Short rows are padded with NaN by the parser
    short = df.isna().any(axis=1).to_numpy()
    if short.any():
        row = int(np.flatnonzero(short)[0])
        raise DataError('%s: malformed row %d (line %d): too few fields' % (
            path, row, row + 2))

    used = [c for c in header if schema[c] != 'ignore']
    cells = df[used].apply(lambda col: col.str.strip())
    missing = cells.isin(MISSING_TOKENS).any(axis=1).to_numpy()
    keep = ~missing
    dropped = int(missing.sum())

    features, names = [], []
    label_column = label_columns[0]
    tags = None
    for column in used:
        values = cells[column]
        role = schema[column]
        if role == 'numeric':
            features.append(_parse_numeric(path, column, values, keep))
            names.append(column)
        elif role == 'categorical':
            levels = sorted(set(values[keep]))
            features.append(_encode(values[keep], levels).astype(np.float64))
            names.append(column)
        elif role == 'tag':
            tags = _parse_numeric(path, column, values, keep).astype(np.int64)
    label_values = cells[label_column][keep]
    class_names = sorted(set(label_values))
    labels = _encode(label_values, class_names)

    n = int(keep.sum())
    matrix = (np.column_stack(features) if features
              else np.empty((n, 0), dtype=np.float64))
    dataset = Dataset(matrix, labels,
                      n_classes=max(len(class_names), 1),
                      submodel_tags=tags,
                      column_names=names,
                      class_names=class_names or ['0'])
    return CSVData(dataset, dropped)


def write_csv(ds, path, label_column='Y', tag_column='submodel'):
    """ Write ds with a header line, features first, then the label (by
        class name) and the submodel tag when present. Floats are written
        with 17 significant digits, so load_csv restores them exactly.
    """
    df = pd.DataFrame(np.asarray(ds.features), columns=list(ds.column_names))
    names = np.array(ds.class_names, dtype=object)
    df[label_column] = names[ds.labels] if len(ds) else []
    if ds.submodel_tags is not None:
        df[tag_column] = ds.submodel_tags.astype(np.int64)
    df.to_csv(path, index=False, float_format='%.17g', encoding='utf-8')


def iter_rows(ds):
    """ Yield (x, y) pairs of ds one row at a time, in file order.
    """
    for i in range(len(ds)):
        yield ds.features[i], int(ds.labels[i])


#------------------------- PRIVATE -------------------------

def _parse_numeric(path, column, values, keep):
    numbers = pd.to_numeric(values, errors='coerce').to_numpy(dtype=np.float64)
    bad = keep & ~np.isfinite(numbers)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DataError(
            '%s: row %d (line %d): non-numeric value %r in column %r' % (
                path, row, row + 2, values.iloc[row], column))
    return numbers[keep]


def _encode(values, levels):
    index = dict((level, i) for i, level in enumerate(levels))
    return np.array([index[v] for v in values], dtype=np.int64)
