# triwave: Inversionless infrared generation by intracavity difference-frequency mixing.
#
# Author: Peter Odding <peter@peterodding.com>
# Last Change: October 19, 2026
# URL: https://triwave.readthedocs.io

"""
Deterministic emission of result tables.

Tables are lists of flat dictionaries (see :func:`triwave.scenario.run_sweep()`).
:func:`emit()` renders them as CSV or JSON with stable column order, floats in
their shortest round-trip form and LF line endings, so identical inputs give
byte-identical files on every platform. Files are written atomically with
:func:`write_file()`: readers never see a partially written table.
"""

# Standard library modules.
import contextlib
import csv
import errno
import io
import json
import math
import numbers
import os

# External dependencies.
import numpy
from humanfriendly import Timer
from humanfriendly.text import pluralize
from verboselogs import VerboseLogger

# Modules included in our package.
from triwave import ValidationError

# Public identifiers that require documentation.
__all__ = (
    'FORMATS',
    'emit',
    'get_columns',
    'get_temporary_file',
    'logger',
    'make_dirs',
    'render_table',
    'render_value',
    'write_file',
)

FORMATS = ('csv', 'json')
"""The supported output formats (a tuple of strings)."""

# Initialize a logger for this module.
logger = VerboseLogger(__name__)


def emit(table, format='csv', path=None):
    """
    Render a table and write it to a file.

    :param table: A nonempty list of flat dictionaries.
    :param format: One of the strings in :data:`FORMATS`.
    :param path: The pathname of the output file (a string) or :data:`None`
                 to only render the table.
    :returns: The rendered table (a string).
    :raises: :exc:`.ValidationError` when the table is empty, the format is
             unknown or the file can't be written.
    """
    text = render_table(table, format)
    if path:
        try:
            with write_file(path) as handle:
                handle.write(text.encode('UTF-8'))
        except (IOError, OSError) as e:
            raise ValidationError("Can't write output file %s: %s" % (path, e.strerror or e))
        logger.info("Wrote %s to %s.", pluralize(len(table), "row"), path)
    return text


def render_table(table, format='csv'):
    """
    Render a table as text.

    :param table: A nonempty list of flat dictionaries.
    :param format: One of the strings in :data:`FORMATS`.
    :returns: The rendered table (a string ending in a newline).
    :raises: :exc:`.ValidationError` when the table is empty or the format unknown.
    """
    if not table:
        raise ValidationError("Refusing to emit an empty table!")
    if format not in FORMATS:
        raise ValidationError("Unsupported output format %r (expected one of %s)!" % (format, ", ".join(FORMATS)))
    columns = get_columns(table)
    if format == 'json':
        rows = [dict((name, _json_value(row.get(name))) for name in columns) for row in table]
        # Keys keep the column order.
        return json.dumps(rows, indent=2, allow_nan=False) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in table:
        writer.writerow([render_value(row.get(name)) for name in columns])
    return buffer.getvalue()


def get_columns(table):
    """
    Get the columns of a table in a stable order.

    :param table: A list of dictionaries.
    :returns: A list with the keys of the first row followed by the keys
              that only appear in later rows, in order of appearance.

    >>> from triwave.output import get_columns
    >>> get_columns([dict(a=1, b=2), dict(b=3, c=4)])
    ['a', 'b', 'c']
    """
    columns = []
    for row in table:
        columns.extend(name for name in row if name not in columns)
    return columns


def render_value(value):
    """
    Render a single table value for CSV output.

    :param value: A number, boolean, string or :data:`None`.
    :returns: A string. Floats use their shortest round-trip representation,
              booleans become ``true`` or ``false`` and :data:`None` becomes
              the empty string.

    >>> from triwave.output import render_value
    >>> render_value(0.1), render_value(True), render_value(None), render_value(3)
    ('0.1', 'true', '', '3')
    """
    if value is None:
        return ''
    if isinstance(value, (bool, numpy.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return repr(float(value))
    return str(value)


@contextlib.contextmanager
def write_file(filename):
    """
    Atomically create or replace a file.

    :param filename: The pathname of the file (a string).
    :returns: A binary file object whose contents will be used to create or
              atomically replace `filename`.
    """
    timer = Timer()
    logger.debug("Preparing to create or atomically replace file (%s) ..", filename)
    make_dirs(os.path.dirname(filename))
    temporary_file = get_temporary_file(filename)
    try:
        with open(temporary_file, 'wb') as handle:
            yield handle
        logger.debug("Moving new contents into place (%s -> %s) ..", temporary_file, filename)
        os.rename(temporary_file, filename)
    except BaseException:
        if os.path.exists(temporary_file):
            os.unlink(temporary_file)
        raise
    logger.debug("Took %s to create or replace file.", timer)


def get_temporary_file(filename):
    """
    Generate a temporary filename next to `filename`.

    :param filename: The filename on which the name of the temporary file
                     should be based (a string).
    :returns: The filename of a hidden file in the same directory (a string),
              so that it can be renamed into place.
    """
    directory, basename = os.path.split(filename)
    return os.path.join(directory, '.%s.tmp-%i' % (basename, os.getpid()))


def make_dirs(directory):
    """
    Create a directory if it doesn't already exist.

    :param directory: The pathname of a directory (a string, the empty string
                      means the working directory).
    :returns: :data:`True` if the directory was created, :data:`False` otherwise.
    """
    if not directory:
        return False
    try:
        os.makedirs(directory)
        logger.debug("Created directory %s.", directory)
        return True
    except OSError as e:
        if e.errno == errno.EEXIST and os.path.isdir(directory):
            return False
        raise


def _json_value(value):
    if isinstance(value, (bool, numpy.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        return value if math.isfinite(value) else None
    return value
