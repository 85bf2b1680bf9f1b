"""
Utilities for CSV reports.
Reports open with a block of '#'-prefixed comment lines (resolved configuration,
versions, seed) followed by a regular CSV header and the data rows.
"""

from core.utils.file_utils import create_dir_tree, is_empty_file, empty_file
from csv import DictReader


CHAR_TO_REPLACE = [" ", "/"]
COMMENT = "#"
PREC = 12


def save_csv(filename, names, data, append=False, skip_header=False, empty=False, comments=None):
    """
    Save data as CSV.
    :param filename: (string) the filename.
    :param names: (list(string)) the column names.
    :param data: (list(tuple)) the rows.
    :param append: (bool) if True, append to an existing file.
    :param skip_header: (bool) if True, skip the CSV header.
    :param empty: (bool) if True, the file is emptied.
    :param comments: (list(string)) comment lines written before the header of a new file.
    :return: None
    """
    create_dir_tree(filename)

    if empty:
        empty_file(filename)

    fresh = is_empty_file(filename) or not append

    with open(filename, "a+" if append else "w+") as f:
        if fresh:
            for line in comments or []:
                f.write("{} {}\n".format(COMMENT, line))
            if not skip_header:
                f.write(",".join(map(str_csv, names)))
                f.write("\n")

        for sample in data:
            f.write(",".join(map(str_value, sample)))
            f.write("\n")


def str_csv(s):
    """
    Make a column name compatible with the CSV format.
    :param s: (str) the name.
    :return: the lower-case name, with blanks and slashes replaced.
    """
    for c in CHAR_TO_REPLACE:
        s = s.replace(c, "_")
    return s.lower()


def str_value(v):
    """
    Render a cell value; floats use a fixed number of significant digits.
    :param v: (object) the value.
    :return: (str) the rendering.
    """
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return "{:.{}g}".format(v, PREC)
    return str(v)


def read_csv(file_path):
    """
    Read a CSV report, skipping its comment block.
    :param file_path: (str) the CSV file path.
    :return: (list(dict)) one dictionary per row.
    """
    with open(file_path, "r") as f:
        lines = [line for line in f if not line.startswith(COMMENT)]
    return list(DictReader(lines))


def read_comments(file_path):
    """
    Read the comment block of a CSV report.
    :param file_path: (str) the CSV file path.
    :return: (list(str)) the comment lines, without the '#' prefix.
    """
    with open(file_path, "r") as f:
        return [line[len(COMMENT):].strip() for line in f if line.startswith(COMMENT)]
