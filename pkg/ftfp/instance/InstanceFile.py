"""Reads and writes FTFP instance JSON files.

File layout::

    {"sites": [{"id": 0, "open_cost": "5"}, ...],
     "clients": [{"id": 0, "demand": 2}, ...],
     "distances": [["2", "1/3", ...], ...]}

Split sites additionally carry "origin", the site they were split from.

Classes
-------
SiteRecord
ClientRecord
InstanceRecord

Functions
---------
load(path, check_metric)
save(instance, path)
instance_to_dict(instance)
instance_from_dict(data)
"""

# Standard imports
from fractions import Fraction
import json
from pathlib import Path
from typing import Annotated, List, Optional

# Local imports
from ftfp.errors import InputError
from ftfp.instance.Instance import Client, FtfpInstance, Site, validate
from ftfp.rational import format_rational, parse_rational

# Third-party imports
from pydantic import BaseModel, ConfigDict, PlainValidator, ValidationError, field_validator, model_validator


def _nonnegative(name):
    """Return a validator parsing a nonnegative rational called `name`."""

    def check(value):
        number = parse_rational(value)
        if number < 0:
            raise ValueError(f"{name} must be nonnegative")
        return number
    return check


OpenCost = Annotated[Fraction, PlainValidator(_nonnegative("open cost"))]
Distance = Annotated[Fraction, PlainValidator(_nonnegative("distance"))]


class SiteRecord(BaseModel):
    """One entry of the "sites" list."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    id: int
    open_cost: OpenCost
    origin: Optional[int] = None


class ClientRecord(BaseModel):
    """One entry of the "clients" list."""

    model_config = ConfigDict(extra="forbid")

    id: int
    demand: int

    @field_validator("demand")
    @classmethod
    def check_demand(cls, value):
        if value < 1:
            raise ValueError("demand must be positive")
        return value


class InstanceRecord(BaseModel):
    """Whole instance file, checked for consistent ids and matrix shape."""

    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    sites: List[SiteRecord]
    clients: List[ClientRecord]
    distances: List[List[Distance]]

    @model_validator(mode="after")
    def check_layout(self):
        for position, site in enumerate(self.sites):
            if site.id != position:
                raise ValueError(f"sites[{position}] has id {site.id}; ids must be 0..n-1 in order")
            if site.origin is not None and not 0 <= site.origin < len(self.sites):
                raise ValueError(f"sites[{position}] has unknown origin {site.origin}")
        for position, client in enumerate(self.clients):
            if client.id != position:
                raise ValueError(f"clients[{position}] has id {client.id}; ids must be 0..m-1 in order")
        if len(self.distances) != len(self.sites):
            raise ValueError(f"distances has {len(self.distances)} rows for {len(self.sites)} sites")
        for row, values in enumerate(self.distances):
            if len(values) != len(self.clients):
                raise ValueError(f"distances[{row}] has {len(values)} entries for {len(self.clients)} clients")
        return self

    def to_instance(self):
        sites = tuple(Site(s.id, s.open_cost, s.id if s.origin is None else s.origin) for s in self.sites)
        clients = tuple(Client(c.id, c.demand) for c in self.clients)
        return FtfpInstance(sites, clients, tuple(tuple(row) for row in self.distances))


def instance_to_dict(instance):
    """Return the JSON-ready dict of an instance."""

    sites = []
    for site in instance.sites:
        record = {"id": site.site_id, "open_cost": format_rational(site.open_cost)}
        if site.origin != site.site_id:
            record["origin"] = site.origin
        sites.append(record)
    return {
        "sites": sites,
        "clients": [{"id": c.client_id, "demand": c.demand} for c in instance.clients],
        "distances": [[format_rational(value) for value in row] for row in instance.dist]
    }


def instance_from_dict(data):
    """Build an instance from a parsed JSON dict, raising InputError."""

    try:
        return InstanceRecord.model_validate(data).to_instance()
    except ValidationError as error:
        raise InputError(str(error))


def load(path, check_metric=True):
    """Load an instance file.

    Parameters
    ----------
    path: Path
        path to instance JSON file
    check_metric: bool
        also run `validate` and refuse the first violated constraint;
        callers that report violations themselves pass False

    Raises
    ------
    InputError
        unreadable file, invalid JSON (with line/column), a field that
        breaks an instance invariant (with its location) or a violated
        metric inequality (with its witness)
    """

    path = Path(path)
    try:
        text = path.read_text()
    except OSError as error:
        raise InputError(f"{path}: {error}")
    try:
        instance = InstanceRecord.model_validate_json(text).to_instance()
    except ValidationError as error:
        raise InputError(f"{path}: {error}")
    if check_metric:
        report = validate(instance)
        if report:
            raise InputError(f"{path}: {report[0]}")
    return instance


def save(instance, path):
    """Write an instance file (rationals as strings)."""

    path = Path(path)
    path.write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")
