"""Broadcast hub fanning engine events out to live stream subscribers.

Subscribers only ever receive events published after they subscribed. Each
subscription owns a bounded queue; a subscriber that falls more than
buffer_size events behind starts losing the oldest unread ones.
"""

from __future__ import annotations

import json
import queue
import threading
from dataclasses import dataclass

__all__ = ["Event", "EventHub", "Subscription"]

DEFAULT_BUFFER_SIZE = 512


@dataclass(frozen=True)
class Event:
    name: str
    data: dict

    def sse_frame(self) -> str:
        return f"event: {self.name}\ndata: {json.dumps(self.data, separators=(',', ':'))}\n\n"


class Subscription:
    def __init__(self, hub: "EventHub", buffer_size: int):
        self._hub = hub
        self._queue: queue.Queue[Event] = queue.Queue(maxsize=buffer_size)
        self.dropped = 0

    def get(self, timeout: float | None = None) -> Event | None:
        """Next event, or None if nothing arrived within the timeout."""
        try:
            return self._queue.get(timeout=timeout)
        except queue.Empty:
            return None

    def _offer(self, event: Event) -> None:
        try:
            self._queue.put_nowait(event)
        except queue.Full:
            self.dropped += 1

    def close(self) -> None:
        self._hub.unsubscribe(self)


class EventHub:
    def __init__(self, buffer_size: int = DEFAULT_BUFFER_SIZE):
        self.buffer_size = buffer_size
        self._subscribers: list[Subscription] = []
        self._lock = threading.Lock()

    def subscribe(self) -> Subscription:
        subscription = Subscription(self, self.buffer_size)
        with self._lock:
            self._subscribers.append(subscription)
        return subscription

    def unsubscribe(self, subscription: Subscription) -> None:
        with self._lock:
            if subscription in self._subscribers:
                self._subscribers.remove(subscription)

    def publish(self, name: str, data: dict) -> None:
        event = Event(name, data)
        with self._lock:
            subscribers = list(self._subscribers)
        for subscription in subscribers:
            subscription._offer(event)

    def subscriber_count(self) -> int:
        with self._lock:
            return len(self._subscribers)
