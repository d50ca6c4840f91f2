package com.example.util;

public class CycleA {
    CycleB partner;

    void ping() {
        partner.pong();
    }
}
