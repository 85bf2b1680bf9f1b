"""
Utilities for file system management.
"""
import os


def create_dir_tree(filename):
    """
    Create the directory tree holding a file.
    :param filename: (string) the file path.
    :return: None
    """
    dirname = os.path.dirname(filename)
    os.makedirs(dirname if len(dirname) != 0 else os.path.curdir, exist_ok=True)


def is_empty_file(filename):
    """
    Check whether a file is missing or empty.
    :param filename: (string) the file path.
    :return: (bool) True if the file does not exist or has no content.
    """
    return not os.path.exists(filename) or os.path.getsize(filename) == 0


def empty_file(filename):
    """
    Truncate (or create) a file.
    :param filename: (string) the file path.
    :return: None
    """
    create_dir_tree(filename)
    with open(filename, "w"):
        pass


def save_txt(content, filename, append=False, empty=False):
    """
    Save a string onto a file.
    :param content: (object) the content; str() is written.
    :param filename: (string) the file path.
    :param append: (bool) if True, append to an existing file.
    :param empty: (bool) if True, the file is emptied first.
    :return: None
    """
    create_dir_tree(filename)
    if empty:
        empty_file(filename)
    with open(filename, "a+" if append else "w+") as f:
        f.write(str(content))


class OutputTracker:
    """
    Records the files written by a run, so that a failed run can remove its partial outputs.
    """

    def __init__(self, outdir):
        """
        Create a new tracker.
        :param outdir: (string) the output directory of the run.
        """
        self.outdir = outdir
        self.files = []

    def path(self, name):
        """
        Resolve a file name inside the output directory and track it.
        :param name: (string) the file name.
        :return: (string) the full path.
        """
        filename = os.path.join(self.outdir, name)
        if filename not in self.files:
            self.files.append(filename)
        return filename

    def track(self, filename):
        """
        Track a file given by full path.
        :param filename: (string) the file path.
        :return: (string) the same path.
        """
        if filename not in self.files:
            self.files.append(filename)
        return filename

    def remove_all(self):
        """
        Remove every tracked file that exists.
        :return: (int) the number of removed files.
        """
        removed = 0
        for filename in self.files:
            if os.path.exists(filename):
                os.remove(filename)
                removed += 1
        self.files = []
        return removed

    def written(self):
        """
        :return: (list) tracked files that exist on disk.
        """
        return [f for f in self.files if os.path.exists(f)]
