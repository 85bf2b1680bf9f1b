import os
import shutil
import tempfile
import unittest
from core.utils.report import SimpleReport
from core.utils.csv_utils import read_csv, read_comments
from core.utils.file_utils import OutputTracker


def line(name, value):
    return "{}{}\n".format(name.ljust(42, "."), value.rjust(21, "."))


class ReportTest(unittest.TestCase):

    def setUp(self):
        """
        The test setup.
        :return: None
        """
        self.r = SimpleReport("SAMPLE REPORT")
        self.r.add("Section-1", "1st Value", 1)
        self.r.add("Section-1", "2nd Value", 2.123)
        self.r.add("Section-2/Subsection-1", "3rd Value", "Hello World")
        self.r.add_all("Section-3", {"flag": True, "ratio": 1.0 / 3.0})

        self.outdir = tempfile.mkdtemp()
        self.file_txt = os.path.join(self.outdir, "test.txt")
        self.file_csv = os.path.join(self.outdir, "test.csv")

    def tearDown(self):
        shutil.rmtree(self.outdir)

    def expected_txt(self):
        s = "\n"
        s += "=" * 63 + "\n"
        s += "{:^63}\n".format("SAMPLE REPORT")
        s += "=" * 63 + "\n"
        s += "\n{:^63}\n".format("Section-1")
        s += line("1st Value", "1")
        s += line("2nd Value", "2.123")
        s += "\n{:^63}\n".format("Section-2/Subsection-1")
        s += line("3rd Value", "Hello World")
        s += "\n{:^63}\n".format("Section-3")
        s += line("flag", "True")
        s += line("ratio", "0.3333333333")
        return s

    def test_string_representation(self):
        """
        Test the report string representation.
        :return: None
        """
        self.assertEqual(self.expected_txt(), str(self.r), "String representation is not correct.")

    def test_save_txt(self):
        """
        Test the report saving to a TXT file.
        :return: None
        """
        self.r.save_txt(self.file_txt)

        with open(self.file_txt, "r") as f:
            actual = f.read()

        self.assertEqual(self.expected_txt(), actual, "TXT file representation is not correct.")

    def test_save_csv(self):
        """
        Test the report saving to a CSV file, with its comment block.
        :return: None
        """
        self.r.save_csv(self.file_csv, comments=["pysil 1.0.0", "seed = 7"])

        rows = read_csv(self.file_csv)
        print("rows:", rows)
        self.assertEqual(len(rows), 1)
        self.assertEqual(list(rows[0].keys()), ["name", "section-1_1st_value", "section-1_2nd_value",
                                                "section-2_subsection-1_3rd_value", "section-3_flag",
                                                "section-3_ratio"])
        self.assertEqual(rows[0]["name"], "SAMPLE REPORT")
        self.assertEqual(rows[0]["section-3_flag"], "True")
        self.assertEqual(read_comments(self.file_csv), ["pysil 1.0.0", "seed = 7"])
        self.assertEqual(self.r.get("Section-1", "2nd Value"), 2.123)
        self.assertIsNone(self.r.get("Section-4", "1st Value"))

    def test_tracker(self):
        """
        Verify that the tracker removes exactly the files that were written.
        :return: None
        """
        tracker = OutputTracker(self.outdir)
        self.r.save_txt(tracker.path("a.txt"))
        tracker.path("never_written.txt")
        self.assertEqual(tracker.written(), [os.path.join(self.outdir, "a.txt")])
        self.assertEqual(tracker.remove_all(), 1)
        self.assertEqual(os.listdir(self.outdir), [])


if __name__ == "__main__":
    unittest.main()
