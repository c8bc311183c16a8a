import pandas as pd
import pytest

from surround_tools.df_tools import print_df, rows_to_dataframe, write_dataframe_to_file


@pytest.fixture
def table():
    return rows_to_dataframe([{'family': 'star', 'k': 3, 'status': 'PASS'},
                              {'family': 'k33', 'k': 3, 'status': 'PASS', 'note': 'x'}])


def test_rows_keep_first_seen_columns(table):
    assert list(table.columns) == ['family', 'k', 'status', 'note']
    assert len(table) == 2
    assert rows_to_dataframe([]).empty


@pytest.mark.parametrize('name', ['out.csv', 'out.json'])
def test_write_dataframe(tmp_path, table, name):
    path = write_dataframe_to_file(table, str(tmp_path / 'sub' / name), create_dir=True)
    back = pd.read_csv(path) if name.endswith('.csv') else pd.read_json(path, orient='records')
    assert list(back['family']) == ['star', 'k33']
    assert list(back['k']) == [3, 3]


def test_write_dataframe_errors(tmp_path, table):
    with pytest.raises(ValueError, match='not accepted'):
        write_dataframe_to_file(table, str(tmp_path / 'out.xlsx'))
    with pytest.raises(ValueError, match='dataframe'):
        write_dataframe_to_file([{'a': 1}], str(tmp_path / 'out.csv'))
    with pytest.raises(ValueError, match='does not exist'):
        write_dataframe_to_file(table, str(tmp_path / 'missing' / 'out.csv'))


def test_print_df_returns_text(table):
    text = print_df(table, title='families')
    assert 'k33' in text and 'status' in text
    assert print_df(rows_to_dataframe([])) == '(no rows)'
    assert print_df('not a frame') == ''
