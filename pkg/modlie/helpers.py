import pandas as pd

from modlie.utilities import character_key


def load_from_excel(file_path, sheet_name=None):
    """
    Reads one sheet of an .xlsx file back into row dictionaries keyed by column header (the inverse of
    :py:func:`export_to_excel` for flat records).

    :param file_path: Path of the .xlsx file.
    :type file_path: str
    :param sheet_name: Sheet to read (optional, defaults to the first sheet).
    :type sheet_name: str
    :return: One dictionary per row.
    :rtype: list of dict
    """
    xl = pd.ExcelFile(file_path, engine='openpyxl')
    sheet_name = sheet_name if sheet_name else xl.sheet_names[0]

    return xl.parse(sheet_name, index_col=None).to_dict('records')


def export_to_excel(data, file_path, sheet_name="Sheet1", field_order=None, sorting_fields=None):
    """
    Writes row dictionaries to an .xlsx file, one column per key. Weight tables and verification reports go through
    here.

    :param data: Rows for a single sheet, or ``{sheet name: rows}`` for several sheets (``sheet_name`` is then
        ignored).
    :type data: list of dict or dict
    :param file_path: Path of the .xlsx file; an existing file is overwritten.
    :type file_path: str
    :param sheet_name: Sheet name for a single list of rows (optional, defaults to "Sheet1").
    :type sheet_name: str
    :param field_order: Column order, left to right. Keys missing from it are not written. (optional)
    :type field_order: list of str
    :param sorting_fields: Columns to sort rows by, in priority order, ascending. (optional)
    :type sorting_fields: list of str
    :return: None
    """
    sheets = data if isinstance(data, dict) else {sheet_name: data}
    with pd.ExcelWriter(file_path, engine='openpyxl') as writer:
        for name, rows in sheets.items():
            df = pd.DataFrame(rows)
            if field_order:
                df = df[[f for f in field_order if f in df.columns]]
            if sorting_fields and not df.empty:
                df = df.sort_values(sorting_fields)
            df.to_excel(writer, sheet_name=name, index=False)


def weight_table_records(wd):
    """
    Rows ``{"character", "dim", "zero"}`` of a weight decomposition, the zero character first.

    :param wd: Decomposition to tabulate.
    :type wd: :py:class:`~modlie.weights.WeightDecomposition`
    :rtype: list of dict
    """
    rows = [{"character": character_key((0,) * wd.mu), "dim": wd.zero_space.dim, "zero": True}]
    for character, dim in sorted(wd.table.items()):
        rows.append({"character": character_key(character), "dim": dim, "zero": False})
    return rows


def report_records(report):
    """
    Flattens a verification report into one row per check. Witness values that are not scalars are written as their
    string form.

    :param report: Report as returned by :py:meth:`~modlie.suites.VerificationReport.to_dict`.
    :type report: dict
    :rtype: list of dict
    """
    rows = []
    for check in report["checks"]:
        row = {"suite": report["suite"], "id": check["id"], "status": check["status"],
               "wall_time": round(check["wall_time"], 4)}
        for key, value in sorted(check["witness"].items()):
            row["witness_" + key] = value if isinstance(value, (int, float, str, bool)) or value is None \
                else str(value)
        rows.append(row)
    return rows
