"""This file contains the code for "Run a verification suite." in the "Example Usage" section of the documentation."""

import json

from modlie.config import Config
from modlie.helpers import export_to_excel, report_records
from modlie.suites import run_suite
from modlie.utilities import to_plain

# a config with fewer torus search restarts than the default
config = Config.from_env(restarts=16)

report = run_suite("skryabin", p=5, n=2, m=1, n_vec=[2], config=config, jobs=2)
print(json.dumps(to_plain(report.to_dict()), indent=2, sort_keys=True))

if not report.passed:
    print("failed checks:", report.failures())

export_to_excel(report_records(to_plain(report.to_dict())), "skryabin.xlsx", sheet_name="skryabin")
